//! Exact constructions of right-angled Artin group representations from
//! configurations of maximal flats, together with certificates of the
//! finitely checkable hypotheses that make them discrete and faithful.

pub mod exactfield;
pub mod modp;
pub mod raag;
pub mod symspace;
pub mod builders;
pub mod certify;
pub mod cli;
