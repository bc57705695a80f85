//! Solving for the last rotations so that a chain of flats closes up.

use super::{tau_embed, Axis, BuildError, PlaneRotation, RotationParam};
use crate::exactfield::{ExactMatrix, FieldElement};

fn expect_axis(r: &RotationParam, axis: Axis) -> Result<(), BuildError> {
    if r.axis != axis {
        return Err(BuildError::WrongAxis { expected: axis, found: r.axis });
    }
    Ok(())
}

/// Rotation `(c, s)` with `c·u + s·v = 0`, i.e. `(c, s) = ±(v, −u)/√(u² + v²)`.
///
/// Takes the sign with nonnegative cosine, and positive sine when the cosine vanishes.
/// Returns the identity when `u = v = 0`.
fn zeroing_rotation(u: &FieldElement, v: &FieldElement) -> Result<PlaneRotation, BuildError> {
    let norm_sq = &u.square() + &v.square();
    if norm_sq.is_zero() {
        return Ok(PlaneRotation::identity());
    }
    let q = norm_sq
        .as_rational()
        .ok_or_else(|| BuildError::UnsupportedExtension(format!("squared norm {norm_sq} is irrational")))?;
    let r = FieldElement::sqrt_rational(&q).map_err(|e| BuildError::UnsupportedExtension(e.to_string()))?;
    let r_inv = r.inv()?;
    let mut c = v * &r_inv;
    let mut s = -&(u * &r_inv);
    if c.signum() < 0 || (c.is_zero() && s.signum() < 0) {
        c = -c;
        s = -s;
    }
    PlaneRotation::new(c, s)
}

fn column(v: &[i64]) -> Vec<FieldElement> {
    v.iter().map(|&x| FieldElement::from_int(x)).collect()
}

/// Given `R₁` about x and `R₂` about y, finds `R₃` about z and `R₄` about x with
/// `R₄R₃R₂R₁` fixing `W = (0, 1, 0)`, so the product commutes with `diag(2, 1/4, 2)`.
///
/// `R₃` zeroes the first coordinate of `Y = R₂R₁W`; `R₄` then carries `R₃Y` to `W`.
pub fn solve_sl3_closure(
    r1: &RotationParam,
    r2: &RotationParam,
) -> Result<(RotationParam, RotationParam), BuildError> {
    expect_axis(r1, Axis::X)?;
    expect_axis(r2, Axis::Y)?;
    let w = column(&[0, 1, 0]);
    let y = r2.matrix().try_mul(&r1.matrix())?.apply(&w)?;
    // z-rotation on (x, y): new x = c·y₀ + s·y₁.
    let r3 = RotationParam { axis: Axis::Z, rotation: zeroing_rotation(&y[0], &y[1])? };
    let v = r3.matrix().apply(&y)?;
    // x-rotation on (y, z): new y = c·v₁ + s·v₂ = 1 and new z = 0 force (c, s) = (v₁, v₂).
    let r4 = RotationParam::new(Axis::X, v[1].clone(), v[2].clone())?;
    let product = r4.matrix().try_mul(&r3.matrix())?.try_mul(&r2.matrix())?.try_mul(&r1.matrix())?;
    if product.apply(&w)? != w {
        return Err(BuildError::ClosureFailed("R₄R₃R₂R₁ does not fix (0, 1, 0)".into()));
    }
    if !product.commutes_with(&super::sl3_t(2))? {
        return Err(BuildError::ClosureFailed("R₄R₃R₂R₁ does not commute with T₂".into()));
    }
    Ok((r3, r4))
}

/// Given `R₁, R₃` in the image of `τ₁` and `R₂` in the image of `τ₀`, finds `R₄ = τ₀(…)` and
/// `R₅ = τ₁(…)` with `R₅R₄R₃R₂R₁` fixing `e₀`, hence commuting with `T₀`.
///
/// `R₄` zeroes coordinate 1 of `Y = R₃R₂R₁e₀`; `R₅` then carries `R₄Y` to `e₀`.
pub fn solve_so32_closure(
    r1: &PlaneRotation,
    r2: &PlaneRotation,
    r3: &PlaneRotation,
) -> Result<(PlaneRotation, PlaneRotation), BuildError> {
    let (m1, m2, m3) = (tau_embed(1, r1)?, tau_embed(0, r2)?, tau_embed(1, r3)?);
    let e0 = column(&[1, 0, 0, 0, 0]);
    let y = m3.try_mul(&m2)?.try_mul(&m1)?.apply(&e0)?;
    // τ₀ acts on (1, 2): new coordinate 1 = c·y₁ + s·y₂.
    let r4 = zeroing_rotation(&y[1], &y[2])?;
    let m4 = tau_embed(0, &r4)?;
    let v = m4.apply(&y)?;
    // τ₁ acts on (0, 2): new coordinate 0 = c·v₀ + s·v₂ = 1 forces (c, s) = (v₀, v₂).
    let r5 = PlaneRotation::new(v[0].clone(), v[2].clone())?;
    let m5 = tau_embed(1, &r5)?;
    let product: ExactMatrix = m5.try_mul(&m4)?.try_mul(&m3)?.try_mul(&m2)?.try_mul(&m1)?;
    if product.apply(&e0)? != e0 {
        return Err(BuildError::ClosureFailed("R₅R₄R₃R₂R₁ does not fix e₀".into()));
    }
    if !product.commutes_with(&super::so32_t0())? {
        return Err(BuildError::ClosureFailed("R₅R₄R₃R₂R₁ does not commute with T₀".into()));
    }
    Ok((r4, r5))
}
