use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde_json::Value;

use super::constructions::derived_extras;
use super::{BuildError, Configuration};
use crate::exactfield::ExactMatrix;
use crate::modp::{is_prime, mul_mod};

/// Replaces each generator `γ_v` by `γ_v^{exps[v]}` and recomputes every edge's singular set
/// from the powered pair. Powers share axes with the originals, so the geodesics are the
/// same; only the chosen axial isometries change.
pub fn power_scale(c: &Configuration, exps: &[u32]) -> Result<Configuration, BuildError> {
    let n = c.graph().vertex_count();
    if exps.len() != n {
        return Err(BuildError::Invalid(format!("{} exponents for {n} vertices", exps.len())));
    }
    if exps.contains(&0) {
        return Err(BuildError::Invalid("exponents must be positive".into()));
    }
    if exps.iter().all(|&k| k == 1) {
        return Ok(c.clone());
    }
    let gens = c
        .generators()
        .iter()
        .zip(exps)
        .map(|(t, &k)| t.matrix().pow(i64::from(k)))
        .collect::<Result<Vec<_>, _>>()?;
    let edges = c
        .edges()
        .iter()
        .map(|e| Ok((e.pair, derived_extras(&gens[e.pair.0], &gens[e.pair.1])?)))
        .collect::<Result<Vec<_>, BuildError>>()?;
    let mut provenance = c.provenance().clone();
    if let Value::Object(map) = &mut provenance {
        map.insert("powers".into(), exps.iter().map(|&k| Value::from(k)).collect());
    }
    let scaled = Configuration::new(c.name(), c.graph().clone(), c.form().clone(), gens, edges, provenance)?;
    scaled.validate()?;
    Ok(scaled)
}

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(0, |acc, k| (acc + mul_mod(a[i][k], b[k][j], p)) % p)).collect())
        .collect()
}

fn is_identity_mod(m: &[Vec<u64>]) -> bool {
    m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == u64::from(i == j)))
}

/// Smallest `e ≥ 1` with `A^e ≡ I (mod p)` for an integer matrix `A` invertible mod `p`.
pub fn congruence_order(a: &ExactMatrix, p: u64) -> Result<u64, BuildError> {
    if !is_prime(p) {
        return Err(BuildError::Invalid(format!("{p} is not prime")));
    }
    let base = a.mod_p(p)?;
    let det = a.det().as_integer().expect("integer matrix has integer determinant");
    if det.mod_floor(&BigInt::from(p)).is_zero() {
        return Err(BuildError::NotInvertibleModP(p));
    }
    // The order divides |GL(n, p)| < p^(n²).
    let bound = u32::try_from(a.dim() * a.dim()).ok().and_then(|k| p.checked_pow(k)).unwrap_or(u64::MAX);
    let mut acc = base.clone();
    let mut e = 1;
    while !is_identity_mod(&acc) {
        if e >= bound {
            return Err(BuildError::Invalid(format!("no congruence order below {bound}")));
        }
        acc = mat_mul_mod(&acc, &base, p);
        e += 1;
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_sl5z, lattice_generator};
    use crate::exactfield::FieldElement;

    #[test]
    fn unit_powers_are_identity_op() {
        let c = build_sl5z(2).unwrap();
        assert_eq!(power_scale(&c, &[1; 5]).unwrap(), c);
        assert!(power_scale(&c, &[0, 1, 1, 1, 1]).is_err());
        assert!(power_scale(&c, &[1; 4]).is_err());
    }

    #[test]
    fn squared_lattice_block() {
        let c = power_scale(&build_sl5z(2).unwrap(), &[2; 5]).unwrap();
        let a = c.generator(0);
        let got: Vec<_> = [(0, 0), (0, 1), (1, 0), (1, 1)].iter().map(|&(i, j)| a.get(i, j).clone()).collect();
        let want: Vec<_> = [7, 4, 12, 7].iter().map(|&x| FieldElement::from_int(x)).collect();
        assert_eq!(got, want);
        assert_eq!(c.edges()[0].extras.len(), 2);
    }

    fn brute_order(a: &ExactMatrix, p: u64) -> u64 {
        let mut m = a.clone();
        for e in 1..10_000 {
            if m.mod_p(p).unwrap().iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == u64::from(i == j))) {
                return e;
            }
            m = m.try_mul(a).unwrap();
        }
        panic!("no order found");
    }

    #[test]
    fn congruence_orders() {
        let a1 = lattice_generator(1, 2);
        assert_eq!(congruence_order(&a1, 3).unwrap(), 6);
        assert_eq!(congruence_order(&a1, 2).unwrap(), 2);
        assert_eq!(congruence_order(&ExactMatrix::identity(5), 7).unwrap(), 1);
        for p in [2, 3, 5, 7] {
            for i in 1..=5 {
                let a = lattice_generator(i, 2);
                assert_eq!(congruence_order(&a, p).unwrap(), brute_order(&a, p));
            }
        }
    }

    #[test]
    fn congruence_errors() {
        let singular = ExactMatrix::from_ints(&[&[2, 0], &[0, 1]]).unwrap();
        assert_eq!(congruence_order(&singular, 2), Err(BuildError::NotInvertibleModP(2)));
        assert!(congruence_order(&ExactMatrix::identity(2), 4).is_err());
        let half = ExactMatrix::diagonal(vec![FieldElement::ratio(1, 2), FieldElement::from_int(2)]);
        assert!(matches!(congruence_order(&half, 3), Err(BuildError::Field(_))));
    }
}
