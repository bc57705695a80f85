use serde_json::{json, Value};

use super::{
    solve_sl3_closure, solve_so32_closure, tau_embed, Axis, BuildError, Configuration, PlaneRotation, RotationParam,
};
use crate::exactfield::json::element_to_json;
use crate::exactfield::{ExactMatrix, FieldElement, PrimeRadicalBasis};
use crate::raag::SimpleGraph;
use crate::symspace::{flat_frame, singular_exponents, GroupForm};

/// `Tᵢ` for `i ∈ {1, 2, 3}`: `1/4` in position `i` and `2` elsewhere.
pub fn sl3_t(i: usize) -> ExactMatrix {
    assert!((1..=3).contains(&i), "T index must be 1, 2 or 3");
    ExactMatrix::diagonal(
        (1..=3)
            .map(|k| if k == i { FieldElement::ratio(1, 4) } else { FieldElement::from_int(2) })
            .collect(),
    )
}

fn hyperbolic_block(i: usize, j: usize) -> ExactMatrix {
    let s3 = FieldElement::sqrt_prime(3);
    let mut m = ExactMatrix::identity(5);
    m.set(i, i, FieldElement::from_int(2));
    m.set(j, j, FieldElement::from_int(2));
    m.set(i, j, s3.clone());
    m.set(j, i, s3);
    m
}

/// `exp(aY₀)` with `a = log(2 + √3)`.
pub fn so32_t0() -> ExactMatrix {
    hyperbolic_block(0, 3)
}

/// `exp(aY₁)` with `a = log(2 + √3)`.
pub fn so32_t1() -> ExactMatrix {
    hyperbolic_block(1, 4)
}

/// The lattice generator `Aᵢ` (`i = 1…5`) with 2×2 block `[[n, n−1], [n+1, n]]`.
pub fn lattice_generator(i: usize, n: i64) -> ExactMatrix {
    let (r, c, upper, lower) = match i {
        1 => (0, 1, n - 1, n + 1),
        2 => (2, 3, n - 1, n + 1),
        3 => (0, 4, n + 1, n - 1),
        4 => (1, 2, n - 1, n + 1),
        5 => (3, 4, n - 1, n + 1),
        _ => panic!("lattice generator index must be 1..=5"),
    };
    let mut m = ExactMatrix::identity(5);
    m.set(r, r, FieldElement::from_int(n));
    m.set(c, c, FieldElement::from_int(n));
    m.set(r, c, FieldElement::from_int(upper));
    m.set(c, r, FieldElement::from_int(lower));
    m
}

/// `R₁` = rotation by 60° about x, `R₂` = rotation by 45° about y.
pub fn default_sl3_rotations() -> (RotationParam, RotationParam) {
    let half = FieldElement::ratio(1, 2);
    let r1 = RotationParam::new(Axis::X, half.clone(), &half * &FieldElement::sqrt_prime(3)).expect("unit");
    let c = &half * &FieldElement::sqrt_prime(2);
    let r2 = RotationParam::new(Axis::Y, c.clone(), c).expect("unit");
    (r1, r2)
}

/// `R₁ = τ₁(3/5, 4/5)`, `R₂ = τ₀(4/5, 3/5)`, `R₃ = τ₁(−31/481, −480/481)`.
pub fn default_so32_rotations() -> (PlaneRotation, PlaneRotation, PlaneRotation) {
    (
        PlaneRotation::rational(3, 4, 5).expect("unit"),
        PlaneRotation::rational(4, 3, 5).expect("unit"),
        PlaneRotation::rational(-31, -480, 481).expect("unit"),
    )
}

fn rotation_json(axis: &str, r: &PlaneRotation) -> Value {
    let basis = PrimeRadicalBasis::default().union(&r.cos().basis()).union(&r.sin().basis());
    json!({"axis": axis, "cos": element_to_json(r.cos(), &basis), "sin": element_to_json(r.sin(), &basis)})
}

fn conj(p: &ExactMatrix, m: &ExactMatrix) -> Result<ExactMatrix, BuildError> {
    Ok(p.try_mul(m)?.try_mul(&p.inv()?)?)
}

/// Singular-set members of the plane spanned by commuting `a` and `b`, other than
/// `a` and `b` themselves, as products `a^x·b^y`.
pub(crate) fn derived_extras(a: &ExactMatrix, b: &ExactMatrix) -> Result<Vec<ExactMatrix>, BuildError> {
    let frame = flat_frame(a, b)?;
    let mut out = Vec::new();
    for (x, y) in singular_exponents(&frame)? {
        if (x, y) == (1, 0) || (x, y) == (0, 1) {
            continue;
        }
        out.push(a.pow(x)?.try_mul(&b.pow(y)?)?);
    }
    Ok(out)
}

/// The five-cycle in `SL(3, ℝ)`: generators and one extra singular geodesic per flat,
/// obtained by conjugating `T₁, T₂, T₃` through the partial products of `R₄R₃R₂R₁`.
pub fn build_sl3(r1: &RotationParam, r2: &RotationParam) -> Result<Configuration, BuildError> {
    let (r3, r4) = solve_sl3_closure(r1, r2)?;
    let (m1, m2, m3, m4) = (r1.matrix(), r2.matrix(), r3.matrix(), r4.matrix());
    let c1 = m4.clone();
    let c2 = c1.try_mul(&m3)?;
    let c3 = c2.try_mul(&m2)?;
    let c4 = c3.try_mul(&m1)?;
    let t = |i| sl3_t(i);
    let generators = vec![t(2), t(1), conj(&c1, &t(3))?, conj(&c2, &t(2))?, conj(&c3, &t(1))?];
    let etas = [t(3), conj(&c1, &t(2))?, conj(&c2, &t(1))?, conj(&c3, &t(3))?, conj(&c4, &t(3))?];
    let edges = etas.into_iter().enumerate().map(|(i, eta)| ((i, (i + 1) % 5), vec![eta])).collect();
    let provenance = json!({
        "construction": "sl3",
        "r1": rotation_json("x", &r1.rotation),
        "r2": rotation_json("y", &r2.rotation),
        "r3": rotation_json("z", &r3.rotation),
        "r4": rotation_json("x", &r4.rotation),
    });
    let config =
        Configuration::new("sl3", SimpleGraph::cycle(5)?, GroupForm::special_linear(3), generators, edges, provenance)?;
    config.validate().map_err(|e| BuildError::ClosureFailed(e.to_string()))?;
    Ok(config)
}

/// The six-cycle in `SO(3, 2)`: generators alternate conjugates of `T₀` and `T₁`, and
/// each flat carries the conjugates of `T₀T₁` and `T₀T₁⁻¹`.
pub fn build_so32(r1: &PlaneRotation, r2: &PlaneRotation, r3: &PlaneRotation) -> Result<Configuration, BuildError> {
    let (r4, r5) = solve_so32_closure(r1, r2, r3)?;
    let (m1, m2, m3) = (tau_embed(1, r1)?, tau_embed(0, r2)?, tau_embed(1, r3)?);
    let (m4, m5) = (tau_embed(0, &r4)?, tau_embed(1, &r5)?);
    let mut partial = vec![ExactMatrix::identity(5), m5.clone()];
    for m in [&m4, &m3, &m2, &m1] {
        let next = partial.last().expect("nonempty").try_mul(m)?;
        partial.push(next);
    }
    let (t0, t1) = (so32_t0(), so32_t1());
    let t1_inv = t1.inv()?;
    let generators = (0..6usize)
        .map(|i| conj(&partial[i.saturating_sub(1)], if i % 2 == 0 { &t0 } else { &t1 }))
        .collect::<Result<Vec<_>, _>>()?;
    let sum = t0.try_mul(&t1)?;
    let diff = t0.try_mul(&t1_inv)?;
    let edges = (0..6)
        .map(|i| Ok(((i, (i + 1) % 6), vec![conj(&partial[i], &sum)?, conj(&partial[i], &diff)?])))
        .collect::<Result<Vec<_>, BuildError>>()?;
    let provenance = json!({
        "construction": "so32",
        "r1": rotation_json("tau1", r1),
        "r2": rotation_json("tau0", r2),
        "r3": rotation_json("tau1", r3),
        "r4": rotation_json("tau0", &r4),
        "r5": rotation_json("tau1", &r5),
    });
    let config = Configuration::new("so32", SimpleGraph::cycle(6)?, GroupForm::so32(), generators, edges, provenance)?;
    config.validate().map_err(|e| BuildError::ClosureFailed(e.to_string()))?;
    Ok(config)
}

/// The five-cycle in `SL(5, ℤ)` for a fixed integer `n ≥ 2`; vertex `v` carries `A_{v+1}`.
/// Singular sets are derived from the singular directions of each edge span.
pub fn build_sl5z(n: i64) -> Result<Configuration, BuildError> {
    if n < 2 {
        return Err(BuildError::TooSmall(format!("n = {n}, need n >= 2")));
    }
    let generators: Vec<ExactMatrix> = (1..=5).map(|i| lattice_generator(i, n)).collect();
    let edges = (0..5)
        .map(|i| {
            let j = (i + 1) % 5;
            Ok(((i, j), derived_extras(&generators[i], &generators[j])?))
        })
        .collect::<Result<Vec<_>, BuildError>>()?;
    let provenance = json!({"construction": "sl5z", "n": n});
    let config =
        Configuration::new("sl5z", SimpleGraph::cycle(5)?, GroupForm::special_linear(5), generators, edges, provenance)?;
    config.validate()?;
    Ok(config)
}
