//! Explicit configurations of geodesics: rotations, closure solvers, the three
//! constructions, power scaling, and reduction modulo primes.

mod closure;
mod config;
mod constructions;
mod scaling;

use crate::exactfield::{ExactMatrix, FieldElement, FieldError};
use crate::raag::GraphError;
use crate::symspace::SymError;

pub use closure::{solve_sl3_closure, solve_so32_closure};
pub use config::{Configuration, EdgeData};
pub use constructions::{
    build_sl3, build_sl5z, build_so32, default_sl3_rotations, default_so32_rotations, lattice_generator, so32_t0,
    so32_t1, sl3_t,
};
pub use scaling::{congruence_order, power_scale};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cos² + sin² ≠ 1 for ({0})")]
    NotUnit(String),
    #[error("expected a rotation about the {expected} axis, got {found}")]
    WrongAxis { expected: Axis, found: Axis },
    #[error("value leaves the supported field: {0}")]
    UnsupportedExtension(String),
    #[error("closure check failed: {0}")]
    ClosureFailed(String),
    #[error("parameter too small: {0}")]
    TooSmall(String),
    #[error("matrix is not invertible modulo {0}")]
    NotInvertibleModP(u64),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// The two coordinates moved by a rotation about this axis, in increasing order.
    pub fn plane(self) -> (usize, usize) {
        match self {
            Axis::X => (1, 2),
            Axis::Y => (0, 2),
            Axis::Z => (0, 1),
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// `[[cos, sin], [−sin, cos]]` with `cos² + sin² = 1` exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneRotation {
    cos: FieldElement,
    sin: FieldElement,
}

impl PlaneRotation {
    pub fn new(cos: FieldElement, sin: FieldElement) -> Result<Self, BuildError> {
        if !(&cos.square() + &sin.square()).is_one() {
            return Err(BuildError::NotUnit(format!("{cos}, {sin}")));
        }
        Ok(Self { cos, sin })
    }

    pub fn identity() -> Self {
        Self { cos: FieldElement::one(), sin: FieldElement::zero() }
    }

    /// Rational point `(a/c, b/c)` on the unit circle.
    pub fn rational(a: i64, b: i64, c: i64) -> Result<Self, BuildError> {
        Self::new(FieldElement::ratio(a, c), FieldElement::ratio(b, c))
    }

    pub fn cos(&self) -> &FieldElement {
        &self.cos
    }

    pub fn sin(&self) -> &FieldElement {
        &self.sin
    }

    pub fn is_identity(&self) -> bool {
        self.cos.is_one() && self.sin.is_zero()
    }
}

/// A rotation of ℝ³ about a coordinate axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RotationParam {
    pub axis: Axis,
    pub rotation: PlaneRotation,
}

impl RotationParam {
    pub fn new(axis: Axis, cos: FieldElement, sin: FieldElement) -> Result<Self, BuildError> {
        Ok(Self { axis, rotation: PlaneRotation::new(cos, sin)? })
    }

    pub fn identity(axis: Axis) -> Self {
        Self { axis, rotation: PlaneRotation::identity() }
    }

    pub fn cos(&self) -> &FieldElement {
        self.rotation.cos()
    }

    pub fn sin(&self) -> &FieldElement {
        self.rotation.sin()
    }

    pub fn matrix(&self) -> ExactMatrix {
        rotation_about_axis(self)
    }
}

/// `[[c, s], [−s, c]]` placed on the plane of `axis` inside the `dim × dim` identity.
fn embed_rotation(dim: usize, axis: Axis, r: &PlaneRotation) -> ExactMatrix {
    let (i, j) = axis.plane();
    let mut m = ExactMatrix::identity(dim);
    m.set(i, i, r.cos.clone());
    m.set(i, j, r.sin.clone());
    m.set(j, i, -&r.sin);
    m.set(j, j, r.cos.clone());
    m
}

/// The 3×3 rotation fixing the named axis.
pub fn rotation_about_axis(p: &RotationParam) -> ExactMatrix {
    embed_rotation(3, p.axis, &p.rotation)
}

/// The embeddings `τ₀` (rotations fixing `e₀`, acting on coordinates 1, 2) and `τ₁`
/// (rotations fixing `e₁`, acting on coordinates 0, 2) of `SO(2)` into `SO(3, 2)`.
pub fn tau_embed(index: usize, r: &PlaneRotation) -> Result<ExactMatrix, BuildError> {
    let axis = match index {
        0 => Axis::X,
        1 => Axis::Y,
        _ => return Err(BuildError::Invalid(format!("no embedding τ{index}"))),
    };
    Ok(embed_rotation(5, axis, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symspace::GroupForm;

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    #[test]
    fn default_rotation_values() {
        let half = FieldElement::ratio(1, 2);
        let hs3 = &half * &FieldElement::sqrt_prime(3);
        let r1 = RotationParam::new(Axis::X, half.clone(), hs3.clone()).unwrap().matrix();
        let expected = ExactMatrix::from_rows(vec![
            vec![fe(1), fe(0), fe(0)],
            vec![fe(0), half.clone(), hs3.clone()],
            vec![fe(0), -&hs3, half.clone()],
        ])
        .unwrap();
        assert_eq!(r1, expected);
        let hs2 = &half * &FieldElement::sqrt_prime(2);
        let r2 = RotationParam::new(Axis::Y, hs2.clone(), hs2.clone()).unwrap().matrix();
        assert_eq!(r2.row(0), &[hs2.clone(), fe(0), hs2.clone()]);
        assert_eq!(r2.row(2), &[-&hs2, fe(0), hs2.clone()]);
        assert!(r2.det().is_one());
        assert_eq!(r2.inv().unwrap(), r2.transpose());
        assert!(RotationParam::new(Axis::Z, fe(1), fe(0)).unwrap().matrix().is_identity());
    }

    #[test]
    fn unit_check() {
        assert!(matches!(PlaneRotation::new(fe(1), fe(1)), Err(BuildError::NotUnit(_))));
        assert!(PlaneRotation::rational(3, 4, 5).is_ok());
        assert!(PlaneRotation::rational(-31, -480, 481).is_ok());
    }

    #[test]
    fn tau_layouts() {
        let r = PlaneRotation::rational(3, 4, 5).unwrap();
        let t0 = tau_embed(0, &r).unwrap();
        assert_eq!(t0.get(1, 1), &FieldElement::ratio(3, 5));
        assert_eq!(t0.get(1, 2), &FieldElement::ratio(4, 5));
        assert_eq!(t0.get(2, 1), &FieldElement::ratio(-4, 5));
        assert!(t0.get(0, 0).is_one() && t0.get(3, 3).is_one());
        let t1 = tau_embed(1, &r).unwrap();
        assert_eq!(t1.get(0, 2), &FieldElement::ratio(4, 5));
        assert_eq!(t1.get(2, 0), &FieldElement::ratio(-4, 5));
        assert!(t1.get(1, 1).is_one());
        let so = GroupForm::so32();
        assert!(so.is_isometry(&t0).unwrap() && so.is_isometry(&t1).unwrap());
        assert!(tau_embed(0, &PlaneRotation::identity()).unwrap().is_identity());
        assert!(tau_embed(2, &r).is_err());
    }
}
