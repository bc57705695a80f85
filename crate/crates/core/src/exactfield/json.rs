//! JSON encoding of field elements and matrices.
//!
//! Integers are written as decimal strings so arbitrarily large coefficients survive.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use super::{ExactMatrix, FieldElement, FieldError, PrimeRadicalBasis, Radical, Rational};

/// Encodes `x` against `basis`, which must contain every prime occurring in `x`.
pub fn element_to_json(x: &FieldElement, basis: &PrimeRadicalBasis) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .map(|(r, q)| {
            json!({
                "subset": r.primes(),
                "num": q.numer().to_string(),
                "den": q.denom().to_string(),
            })
        })
        .collect();
    json!({ "basis": basis.primes(), "terms": terms })
}

pub fn element_from_json(v: &Value) -> Result<FieldElement, FieldError> {
    let basis: Vec<u64> = serde_json::from_value(v.get("basis").cloned().unwrap_or(Value::Null))
        .map_err(|e| FieldError::Malformed(format!("basis: {e}")))?;
    let basis = PrimeRadicalBasis::new(basis)?;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| FieldError::Malformed("missing terms".into()))?;
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let subset: Vec<u64> = serde_json::from_value(t.get("subset").cloned().unwrap_or(Value::Null))
            .map_err(|e| FieldError::Malformed(format!("subset: {e}")))?;
        if let Some(p) = subset.iter().find(|p| !basis.contains(**p)) {
            return Err(FieldError::Malformed(format!("prime {p} outside basis")));
        }
        let num = parse_int(t, "num")?;
        let den = parse_int(t, "den")?;
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        parsed.push((Radical::from_primes(subset), Rational::new(num, den)));
    }
    Ok(FieldElement::from_terms(parsed))
}

fn parse_int(t: &Value, key: &str) -> Result<BigInt, FieldError> {
    t.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| FieldError::Malformed(format!("missing {key}")))?
        .parse()
        .map_err(|_| FieldError::Malformed(format!("{key} is not an integer")))
}

/// `{"dim": n, "entries": [[…], …]}`, every entry sharing the matrix-wide basis.
pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    let basis = m.basis();
    let rows: Vec<Value> = (0..m.dim())
        .map(|i| Value::Array(m.row(i).iter().map(|e| element_to_json(e, &basis)).collect()))
        .collect();
    json!({ "dim": m.dim(), "entries": rows })
}

pub fn matrix_from_json(v: &Value) -> Result<ExactMatrix, FieldError> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| FieldError::Malformed("missing dim".into()))? as usize;
    let rows = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| FieldError::Malformed("missing entries".into()))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| FieldError::Malformed("row is not an array".into()))?
                .iter()
                .map(element_from_json)
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rows.len() != dim {
        return Err(FieldError::DimensionMismatch { expected: dim, found: rows.len() });
    }
    ExactMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_layout() {
        let x = &FieldElement::ratio(-1, 2) + &FieldElement::from_term(Radical::from_primes(vec![2, 5]), Rational::new(1.into(), 4.into()));
        let basis = PrimeRadicalBasis::new(vec![2, 3, 5]).unwrap();
        let v = element_to_json(&x, &basis);
        assert_eq!(
            v,
            json!({"basis": [2, 3, 5], "terms": [
                {"subset": [], "num": "-1", "den": "2"},
                {"subset": [2, 5], "num": "1", "den": "4"}
            ]})
        );
        assert_eq!(element_from_json(&v).unwrap(), x);
    }

    #[test]
    fn huge_integers_survive() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let x = FieldElement::from_bigint(big);
        let v = element_to_json(&x, &PrimeRadicalBasis::default());
        assert_eq!(element_from_json(&v).unwrap(), x);
    }

    #[test]
    fn matrix_round_trip() {
        let mut m = ExactMatrix::identity(3);
        m.set(0, 2, FieldElement::sqrt_prime(3));
        m.set(1, 0, FieldElement::ratio(-31, 481));
        let v = matrix_to_json(&m);
        assert_eq!(matrix_from_json(&v).unwrap(), m);
        assert_eq!(v["entries"][0][0]["basis"], json!([3]));
    }

    #[test]
    fn rejects_malformed() {
        assert!(element_from_json(&json!({"basis": [4], "terms": []})).is_err());
        assert!(element_from_json(&json!({"basis": [2], "terms": [{"subset": [3], "num": "1", "den": "1"}]})).is_err());
        assert!(element_from_json(&json!({"basis": [], "terms": [{"subset": [], "num": "x", "den": "1"}]})).is_err());
        assert!(matrix_from_json(&json!({"dim": 2, "entries": [[]]})).is_err());
    }
}
