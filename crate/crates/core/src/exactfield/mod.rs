//! Exact arithmetic in multiquadratic fields `ℚ(√p₁, …, √p_k)` and dense matrices over them.

mod element;
pub mod json;
mod matrix;

pub use element::{FieldElement, PrimeRadicalBasis, Radical, Rational};
pub use matrix::ExactMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of non-positive value {0}")]
    NegativeRadicand(String),
    #[error("value leaves the supported multiquadratic field: {0}")]
    UnsupportedExtension(String),
    #[error("invalid prime basis: {0}")]
    InvalidBasis(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("entry ({row}, {col}) = {value} is not an integer")]
    NonIntegralEntry { row: usize, col: usize, value: String },
    #[error("malformed serialized value: {0}")]
    Malformed(String),
}
