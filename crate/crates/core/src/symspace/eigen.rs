//! Characteristic polynomials and exact simultaneous diagonalization.
//!
//! Eigenvalues are isolated with Sturm chains over ℚ and recognized as rationals or
//! roots of rational quadratics, each confirmed by exact polynomial division.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SymError;
use crate::exactfield::{ExactMatrix, FieldElement, Rational};

/// Characteristic polynomial `det(λI − A)` by Faddeev–LeVerrier, lowest degree first.
pub fn char_poly(a: &ExactMatrix) -> Vec<FieldElement> {
    let n = a.dim();
    let mut coeffs = vec![FieldElement::zero(); n + 1];
    coeffs[n] = FieldElement::one();
    let identity = ExactMatrix::identity(n);
    let mut m = ExactMatrix::zero(n);
    for k in 1..=n {
        m = &(a * &m) + &identity.scale(&coeffs[n - k + 1]);
        let am = a * &m;
        let k_inv = FieldElement::ratio(-1, k as i64);
        coeffs[n - k] = &am.trace() * &k_inv;
    }
    coeffs
}

/// Best rational approximation with denominator at most `max_den`, if within `tol`.
pub(crate) fn recognize_rational(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= tol * x.abs().max(1.0) {
            return Some(Rational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Exact division by a monic polynomial; `None` unless the remainder vanishes.
fn poly_div_monic(p: &[Rational], d: &[Rational]) -> Option<Vec<Rational>> {
    let dd = d.len() - 1;
    if p.len() <= dd {
        return None;
    }
    let mut rem = p.to_vec();
    let mut quot = vec![Rational::zero(); p.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        for (j, dj) in d.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    rem[..dd].iter().all(Zero::is_zero).then_some(quot)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    let d: Vec<Rational> = p.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(i.into())).collect();
    if d.is_empty() {
        vec![Rational::zero()]
    } else {
        trim(d)
    }
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Remainder of `a` modulo nonzero `b`.
fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem = trim(a.to_vec());
    while rem.len() > db && !is_zero_poly(&rem) {
        let shift = rem.len() - 1 - db;
        let c = rem.last().expect("nonempty") / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        rem.pop();
        rem = trim(rem);
    }
    rem
}

fn monic(p: Vec<Rational>) -> Vec<Rational> {
    let lead = p.last().expect("nonempty").clone();
    p.into_iter().map(|c| c / &lead).collect()
}

fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !is_zero_poly(&b) {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

/// Sign changes of the Sturm chain at `x`, zeros skipped.
fn sign_changes(chain: &[Vec<Rational>], x: &Rational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| poly_eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// A real root of a squarefree polynomial, known to lie in `(lo, hi]`.
#[derive(Clone)]
struct Isolated {
    lo: Rational,
    hi: Rational,
}

impl Isolated {
    fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    fn bisect(&mut self, chain: &[Vec<Rational>]) {
        if self.lo == self.hi {
            return;
        }
        if poly_eval(&chain[0], &self.hi).is_zero() {
            self.lo = self.hi.clone();
            return;
        }
        let mid = (&self.lo + &self.hi) / Rational::from_integer(2.into());
        if sign_changes(chain, &self.lo) > sign_changes(chain, &mid) {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    fn refine_below(&mut self, chain: &[Vec<Rational>], width: &Rational) {
        while &self.width() > width {
            self.bisect(chain);
        }
    }
}

/// Isolating intervals for the real roots of squarefree `g`, ascending.
fn isolate(g: &[Rational], chain: &[Vec<Rational>]) -> Vec<Isolated> {
    let lead = g.last().expect("nonempty");
    let bound = g.iter().map(|c| (c / lead).abs()).fold(Rational::zero(), |m, c| if c > m { c } else { m });
    let bound = Rational::from_integer(bound.ceil().to_integer() + 1);
    let mut stack = vec![Isolated { lo: -bound.clone(), hi: bound }];
    let mut out = Vec::new();
    while let Some(iv) = stack.pop() {
        let count = sign_changes(chain, &iv.lo) - sign_changes(chain, &iv.hi);
        match count {
            0 => {}
            1 => out.push(iv),
            _ => {
                let mid = (&iv.lo + &iv.hi) / Rational::from_integer(2.into());
                stack.push(Isolated { lo: iv.lo, hi: mid.clone() });
                stack.push(Isolated { lo: mid, hi: iv.hi });
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// The rational of least denominator in `[a, b]`.
fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    if !a.is_positive() && !b.is_negative() {
        return Rational::zero();
    }
    if b.is_negative() {
        return -simplest_between(&-b, &-a);
    }
    let ceil = a.ceil();
    if &ceil <= b {
        return ceil;
    }
    let fl = a.floor();
    fl.clone() + simplest_between(&(b - &fl).recip(), &(a - &fl).recip()).recip()
}

fn multiplicity(p: &mut Vec<Rational>, factor: &[Rational]) -> usize {
    let mut k = 0;
    while let Some(q) = poly_div_monic(p, factor) {
        *p = q;
        k += 1;
    }
    k
}

/// Real roots of a monic rational polynomial, with multiplicity, when each lies in a
/// multiquadratic field and has degree at most two over ℚ.
///
/// Roots are isolated exactly with a Sturm chain. A rational root `a/b` of the squarefree
/// part `g` has `b | D`, the common denominator of `g`, and two such rationals differ by at
/// least `1/D²`; the same holds for the coefficients of a rational quadratic factor. So
/// once an interval is narrower than `1/(2D²)` its simplest rational is the only candidate.
fn exact_real_roots(poly: &[Rational]) -> Result<Vec<FieldElement>, SymError> {
    let mut p = poly.to_vec();
    let g = poly_div_monic(&p, &poly_gcd(&p, &derivative(&p))).expect("gcd divides");
    let degree = g.len() - 1;
    let mut chain = vec![g.clone(), derivative(&g)];
    while !is_zero_poly(chain.last().expect("nonempty")) && chain.last().expect("nonempty").len() > 1 {
        let k = chain.len();
        let r: Vec<Rational> = poly_rem(&chain[k - 2], &chain[k - 1]).into_iter().map(|c| -c).collect();
        if is_zero_poly(&r) {
            break;
        }
        chain.push(r);
    }
    let mut isolated = isolate(&g, &chain);
    if isolated.len() != degree {
        return Err(SymError::UnsupportedExtension(format!("{} of {degree} eigenvalues are real", isolated.len())));
    }
    let den = g.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let sep = Rational::new(BigInt::one(), BigInt::from(2) * &den * &den);

    let mut roots = Vec::new();
    let mut irrational = Vec::new();
    for mut iv in isolated.drain(..) {
        iv.refine_below(&chain, &sep);
        let q = simplest_between(&iv.lo, &iv.hi);
        if poly_eval(&g, &q).is_zero() {
            let k = multiplicity(&mut p, &[-q.clone(), Rational::one()]);
            roots.extend(std::iter::repeat_n(FieldElement::from_rational(q), k));
        } else {
            irrational.push(iv);
        }
    }
    while !irrational.is_empty() {
        let mut matched = None;
        'search: for i in 0..irrational.len() {
            for j in i + 1..irrational.len() {
                let (mut x, mut y) = (irrational[i].clone(), irrational[j].clone());
                let size = [&x.lo, &x.hi, &y.lo, &y.hi].iter().map(|r| r.abs()).max().expect("nonempty");
                let target = &sep / (Rational::from_integer(4.into()) * (size + Rational::one()));
                x.refine_below(&chain, &target);
                y.refine_below(&chain, &target);
                let s = simplest_between(&(&x.lo + &y.lo), &(&x.hi + &y.hi));
                let corners = [&x.lo * &y.lo, &x.lo * &y.hi, &x.hi * &y.lo, &x.hi * &y.hi];
                let lo = corners.iter().min().expect("nonempty");
                let hi = corners.iter().max().expect("nonempty");
                let prod = simplest_between(lo, hi);
                let quad = [prod.clone(), -s.clone(), Rational::one()];
                if poly_div_monic(&g, &quad).is_some() {
                    matched = Some((i, j, s, prod, quad));
                    break 'search;
                }
            }
        }
        let Some((i, j, s, prod, quad)) = matched else {
            return Err(SymError::UnsupportedExtension(format!(
                "{} eigenvalues are not roots of rational quadratics",
                irrational.len()
            )));
        };
        let half = &s / Rational::from_integer(2.into());
        let disc = &half * &half - prod;
        let root = FieldElement::sqrt_rational(&disc)
            .map_err(|e| SymError::UnsupportedExtension(format!("eigenvalue discriminant {disc}: {e}")))?;
        let centre = FieldElement::from_rational(half);
        let k = multiplicity(&mut p, &quad);
        for _ in 0..k {
            roots.push(&centre - &root);
            roots.push(&centre + &root);
        }
        irrational.remove(j);
        irrational.remove(i);
    }
    Ok(roots)
}

fn rational_char_poly(m: &ExactMatrix) -> Result<Vec<Rational>, SymError> {
    char_poly(m)
        .iter()
        .map(|c| {
            c.as_rational()
                .ok_or_else(|| SymError::UnsupportedExtension(format!("characteristic polynomial coefficient {c}")))
        })
        .collect()
}

/// Exact eigenvalues (with multiplicity, ascending) of a matrix whose eigenvalues are real
/// and each generate at most a quadratic extension of ℚ inside a multiquadratic field.
pub fn eigenvalues(m: &ExactMatrix) -> Result<Vec<FieldElement>, SymError> {
    let mut roots = exact_real_roots(&rational_char_poly(m)?)?;
    roots.sort_by(|a, b| (a - b).signum().cmp(&0));
    Ok(roots)
}

/// Eigenbasis of a diagonalizable matrix, columns ordered by the position of their
/// leading entry and then by ascending eigenvalue.
fn eigenbasis(m: &ExactMatrix) -> Result<Option<ExactMatrix>, SymError> {
    let n = m.dim();
    let mut values = eigenvalues(m)?;
    values.dedup();
    let mut columns = Vec::with_capacity(n);
    for (rank, lambda) in values.iter().enumerate() {
        let shifted = m - &ExactMatrix::identity(n).scale(lambda);
        for v in shifted.null_space() {
            let lead = v.iter().position(|x| !x.is_zero()).unwrap_or(n);
            columns.push((lead, rank, v));
        }
    }
    if columns.len() != n {
        return Ok(None);
    }
    columns.sort_by_key(|(lead, rank, _)| (*lead, *rank));
    let columns: Vec<Vec<FieldElement>> = columns.into_iter().map(|(_, _, v)| v).collect();
    Ok(Some(ExactMatrix::from_columns(&columns)?))
}

/// Number of shifts `A + tB` tried before giving up.
const SHIFT_ATTEMPTS: i64 = 64;

/// A matrix `P` whose columns are common eigenvectors of commuting diagonalizable `a` and `b`,
/// so that `P⁻¹AP` and `P⁻¹BP` are both diagonal.
///
/// Eigenvectors of `A + tB` for the smallest positive integer `t` separating the joint
/// eigenvalues are taken; each column is scaled so its first nonzero entry is 1.
pub fn common_eigenbasis(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix, SymError> {
    if a.dim() != b.dim() {
        return Err(SymError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if !a.commutes_with(b)? {
        return Err(SymError::NotCommuting);
    }
    for t in 1..=SHIFT_ATTEMPTS {
        let m = a + &b.scale(&FieldElement::from_int(t));
        let Some(p) = eigenbasis(&m)? else {
            continue;
        };
        let p_inv = p.inv()?;
        if p_inv.try_mul(a)?.try_mul(&p)?.is_diagonal() && p_inv.try_mul(b)?.try_mul(&p)?.is_diagonal() {
            return Ok(p);
        }
    }
    Err(SymError::NotDiagonalizable)
}

/// Exponents `log αᵢ = coeffsᵢ / denom · log unit` of a positive diagonalizable matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogPattern {
    /// Eigenvalue `> 1` generating every eigenvalue multiplicatively, or 1 for the identity.
    pub unit: FieldElement,
    pub denom: i64,
    /// Primitive integer exponents, one per basis column.
    pub coeffs: Vec<i64>,
}

impl LogPattern {
    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `log unit / denom`, the length scale of one unit of `coeffs`.
    pub fn step(&self) -> f64 {
        self.unit.to_f64().ln() / self.denom as f64
    }
}

/// Largest denominator accepted when comparing eigenvalue logarithms.
const LOG_RATIO_MAX_DEN: i64 = 1000;

/// Logarithmic eigen-pattern of `a` in the basis `p` (which must diagonalize it).
pub fn log_pattern(a: &ExactMatrix, p: &ExactMatrix) -> Result<LogPattern, SymError> {
    let d = p.inv()?.try_mul(a)?.try_mul(p)?;
    if !d.is_diagonal() {
        return Err(SymError::NotDiagonalizable);
    }
    let values = d.diagonal_entries();
    if let Some(bad) = values.iter().find(|v| !v.is_positive()) {
        return Err(SymError::NonPositiveEigenvalue(bad.to_string()));
    }
    let logs: Vec<f64> = values.iter().map(|v| if v.is_one() { 0.0 } else { v.to_f64().ln() }).collect();
    let Some(k) = (0..values.len())
        .filter(|&i| !values[i].is_one())
        .min_by(|&i, &j| logs[i].abs().total_cmp(&logs[j].abs()))
    else {
        return Ok(LogPattern { unit: FieldElement::one(), denom: 1, coeffs: vec![0; values.len()] });
    };
    let unit = if logs[k] > 0.0 { values[k].clone() } else { values[k].inv()? };
    let unit_log = logs[k].abs();
    let mut ratios = Vec::with_capacity(values.len());
    for (v, l) in values.iter().zip(&logs) {
        if v.is_one() {
            ratios.push(Rational::zero());
            continue;
        }
        let r = recognize_rational(l / unit_log, LOG_RATIO_MAX_DEN, 1e-9)
            .ok_or_else(|| SymError::IncommensurableLogs(v.to_string()))?;
        let (num, den) = (r.numer().to_i64().unwrap_or(0), r.denom().to_i64().unwrap_or(0));
        if den == 0 || v.pow(den)? != unit.pow(num)? {
            return Err(SymError::IncommensurableLogs(v.to_string()));
        }
        ratios.push(r);
    }
    let lcm = ratios.iter().fold(BigInt::one(), |acc, r| num_integer::lcm(acc, r.denom().clone()));
    let ints: Vec<BigInt> = ratios.iter().map(|r| (r * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::gcd(acc, x.abs()));
    let coeffs = ints
        .iter()
        .map(|x| (x / &g).to_i64().ok_or_else(|| SymError::IncommensurableLogs("exponent overflow".into())))
        .collect::<Result<Vec<_>, _>>()?;
    let denom = (&lcm / &g).to_i64().ok_or_else(|| SymError::IncommensurableLogs("exponent overflow".into()))?;
    Ok(LogPattern { unit, denom, coeffs })
}
