use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::FieldError;

/// Arbitrary-precision rational with a positive, coprime denominator.
pub type Rational = BigRational;

/// Cutoff for trial division when extracting square factors.
const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

pub(crate) fn is_prime_u64(n: u64) -> bool {
    crate::modp::is_prime(n)
}

/// A sorted set of distinct primes whose square roots generate a multiquadratic field.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeRadicalBasis(Vec<u64>);

impl PrimeRadicalBasis {
    pub fn new(mut primes: Vec<u64>) -> Result<Self, FieldError> {
        primes.sort_unstable();
        for w in primes.windows(2) {
            if w[0] == w[1] {
                return Err(FieldError::InvalidBasis(format!("duplicate prime {}", w[0])));
            }
        }
        if let Some(&p) = primes.iter().find(|&&p| !is_prime_u64(p)) {
            return Err(FieldError::InvalidBasis(format!("{p} is not prime")));
        }
        Ok(Self(primes))
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut primes: Vec<u64> = self.0.iter().chain(other.0.iter()).copied().collect();
        primes.sort_unstable();
        primes.dedup();
        Self(primes)
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Product of square roots of distinct primes, `∏ √p`. The empty product is 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Radical(Vec<u64>);

impl Radical {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn prime(p: u64) -> Self {
        Self(vec![p])
    }

    /// Builds a radical from an arbitrary list of distinct primes.
    pub fn from_primes(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        primes.dedup();
        Self(primes)
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    /// The squarefree radicand `∏ p`.
    pub fn radicand(&self) -> BigUint {
        self.0.iter().fold(BigUint::one(), |acc, &p| acc * p)
    }

    /// `√a · √b = c · √d`; returns `(c, d)` with `c` the product of shared primes.
    fn mul(&self, other: &Self) -> (u64, Radical) {
        let (mut i, mut j) = (0, 0);
        let mut scale = 1u64;
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    scale = scale.checked_mul(self.0[i]).expect("radical scale overflow");
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        (scale, Radical(out))
    }

    fn without(&self, p: u64) -> Radical {
        Radical(self.0.iter().copied().filter(|&q| q != p).collect())
    }

    fn to_f64(&self) -> f64 {
        self.0.iter().map(|&p| (p as f64).sqrt()).product()
    }
}

/// An element of `ℚ(√p₁, …, √p_k)` stored as `Σ c_S ∏_{p∈S} √p` with no zero coefficients.
///
/// Because the products `∏_{p∈S} √p` over distinct subsets are linearly independent
/// over ℚ, structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    terms: BTreeMap<Radical, Rational>,
}

impl FieldElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_term(Radical::one(), q)
    }

    /// `num/den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `q·√(∏ primes)`, with `primes` distinct.
    pub fn from_term(radical: Radical, q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(radical, q);
        }
        Self { terms }
    }

    /// `√p` for a prime `p`.
    pub fn sqrt_prime(p: u64) -> Self {
        Self::from_term(Radical::prime(p), Rational::one())
    }

    /// Builds an element from `(radical, coefficient)` pairs, merging and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Radical, Rational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (r, q) in iter {
            out.add_term(r, q);
        }
        out
    }

    fn add_term(&mut self, radical: Radical, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(radical) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Radical, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(Radical::is_one)
    }

    /// The rational value, when no radical appears.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(r, _)| r.is_one())
                .map(|(_, q)| q.clone()),
            _ => None,
        }
    }

    /// The integer value, when the element is a rational with denominator 1.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// Smallest basis containing every prime used by this element.
    pub fn basis(&self) -> PrimeRadicalBasis {
        let mut primes: Vec<u64> = self.terms.keys().flat_map(|r| r.0.iter().copied()).collect();
        primes.sort_unstable();
        primes.dedup();
        PrimeRadicalBasis(primes)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    fn largest_prime(&self) -> Option<u64> {
        self.terms.keys().filter_map(|r| r.0.last().copied()).max()
    }

    /// Splits `self = x + y·√p` with `x, y` free of `√p`.
    fn split(&self, p: u64) -> (FieldElement, FieldElement) {
        let mut x = FieldElement::zero();
        let mut y = FieldElement::zero();
        for (r, q) in &self.terms {
            if r.contains(p) {
                y.add_term(r.without(p), q.clone());
            } else {
                x.add_term(r.clone(), q.clone());
            }
        }
        (x, y)
    }

    /// Multiplicative inverse by recursive conjugation over the largest adjoined prime.
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let Some(p) = self.largest_prime() else {
            let q = self.as_rational().expect("radical-free element is rational");
            return Ok(FieldElement::from_rational(q.recip()));
        };
        let (x, y) = self.split(p);
        let root = FieldElement::sqrt_prime(p);
        let conjugate = &x - &(&y * &root);
        let norm = &(&x * &x) - &(&(&y * &y) * &FieldElement::from_int(p as i64));
        // The norm lives in the field without √p and is nonzero since √p is independent.
        Ok(&conjugate * &norm.inv()?)
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn square(&self) -> FieldElement {
        self * self
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, exp: i64) -> Result<FieldElement, FieldError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = FieldElement::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.square();
            }
        }
        Ok(acc)
    }

    /// Exact sign of the real number this element denotes (every radical is the positive root).
    pub fn signum(&self) -> i32 {
        let Some(p) = self.largest_prime() else {
            return match self.as_rational() {
                Some(q) if q.is_positive() => 1,
                Some(q) if q.is_negative() => -1,
                _ => 0,
            };
        };
        let (x, y) = self.split(p);
        let sx = x.signum();
        let sy = y.signum();
        if sy == 0 {
            return sx;
        }
        if sx == 0 || sx == sy {
            return sy;
        }
        // Opposite signs: compare x² with p·y².
        let diff = &x.square() - &(&y.square() * &FieldElement::from_int(p as i64));
        sx * diff.signum()
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    /// Floating-point value. Falls back to `1/inv` when the terms cancel badly,
    /// which is the common case for small algebraic units like `(2 − √3)^k`.
    pub fn to_f64(&self) -> f64 {
        let (value, scale) = self.naive_f64();
        if value == 0.0 && self.is_zero() {
            return 0.0;
        }
        if value.abs() > 1e-6 * scale {
            return value;
        }
        match self.inv() {
            Ok(inverse) => {
                let (iv, iscale) = inverse.naive_f64();
                if iv.abs() > 1e-6 * iscale {
                    1.0 / iv
                } else {
                    value
                }
            }
            Err(_) => 0.0,
        }
    }

    fn naive_f64(&self) -> (f64, f64) {
        let mut sum = 0.0;
        let mut scale: f64 = 0.0;
        for (r, q) in &self.terms {
            let t = q.to_f64().unwrap_or(f64::NAN) * r.to_f64();
            scale = scale.max(t.abs());
            sum += t;
        }
        (sum, scale)
    }

    /// Square root of a positive rational: `q = r²·d` with `d` squarefree gives `r·√d`.
    pub fn sqrt_rational(q: &Rational) -> Result<FieldElement, FieldError> {
        if !q.is_positive() {
            return Err(FieldError::NegativeRadicand(q.to_string()));
        }
        // √(n/d) = √(n·d)/d
        let n = q.numer().magnitude();
        let d = q.denom().magnitude();
        let (root, radical) = split_square(&(n * d))?;
        let coeff = Rational::new(BigInt::from(root), BigInt::from(d.clone()));
        Ok(FieldElement::from_term(radical, coeff))
    }

    /// Square root when this element is a positive rational.
    pub fn sqrt(&self) -> Result<FieldElement, FieldError> {
        match self.as_rational() {
            Some(q) => Self::sqrt_rational(&q),
            None => Err(FieldError::UnsupportedExtension(format!("square root of irrational {self}"))),
        }
    }
}

/// Factors `m = r²·d` with `d` squarefree; returns `r` and the primes of `d`.
fn split_square(m: &BigUint) -> Result<(BigUint, Radical), FieldError> {
    let mut rest = m.clone();
    let mut root = BigUint::one();
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_DIVISION_LIMIT {
        if BigUint::from(p) * p > rest {
            break;
        }
        let mut count = 0u32;
        while (&rest % p).is_zero() {
            rest /= p;
            count += 1;
        }
        if count > 0 {
            root *= BigUint::from(p).pow(count / 2);
            if count % 2 == 1 {
                primes.push(p);
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let s = rest.sqrt();
        if &s * &s == rest {
            root *= s;
        } else if rest < BigUint::from(TRIAL_DIVISION_LIMIT) * TRIAL_DIVISION_LIMIT {
            let q = rest.to_u64().ok_or_else(|| FieldError::UnsupportedExtension(format!("radicand {m}")))?;
            primes.push(q);
        } else {
            return Err(FieldError::UnsupportedExtension(format!(
                "cannot extract squarefree part of {m}"
            )));
        }
    }
    Ok((root, Radical::from_primes(primes)))
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (r, q)) in self.terms.iter().enumerate() {
            let (neg, mag) = if q.is_negative() { (true, -q.clone()) } else { (false, q.clone()) };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if r.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "√{}", r.radicand())?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for FieldElement {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        for (r, q) in &rhs.terms {
            self.add_term(r.clone(), q.clone());
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        let mut out = self.clone();
        for (r, q) in &rhs.terms {
            out.add_term(r.clone(), -q.clone());
        }
        out
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        let mut out = FieldElement::zero();
        for (ra, qa) in &self.terms {
            for (rb, qb) in &rhs.terms {
                let (scale, r) = ra.mul(rb);
                let q = qa * qb * Rational::from_integer(BigInt::from(scale));
                out.add_term(r, q);
            }
        }
        out
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            terms: self.terms.iter().map(|(r, q)| (r.clone(), -q.clone())).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn s(p: u64) -> FieldElement {
        FieldElement::sqrt_prime(p)
    }

    #[test]
    fn radical_product_law() {
        let six = &s(2) * &s(3);
        assert_eq!(six, FieldElement::from_term(Radical::from_primes(vec![2, 3]), Rational::one()));
        assert_eq!(&s(5) * &s(5), FieldElement::from_int(5));
        // √6·√10 = 2√15
        let a = FieldElement::from_term(Radical::from_primes(vec![2, 3]), Rational::one());
        let b = FieldElement::from_term(Radical::from_primes(vec![2, 5]), Rational::one());
        let expected = FieldElement::from_term(Radical::from_primes(vec![3, 5]), q(2, 1));
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn difference_of_squares_is_one() {
        let two = FieldElement::from_int(2);
        let plus = &two + &s(3);
        let minus = &two - &s(3);
        assert!((&plus * &minus).is_one());
    }

    #[test]
    fn unit_column_of_r4() {
        // (√10/4)² + (√6/4)²; the oracle is plain rational arithmetic 10/16 + 6/16.
        let a = FieldElement::from_term(Radical::from_primes(vec![2, 5]), q(1, 4));
        let b = FieldElement::from_term(Radical::from_primes(vec![2, 3]), q(1, 4));
        let total = &a.square() + &b.square();
        assert_eq!(total.as_rational(), Some(q(10, 16) + q(6, 16)));
        assert!(total.is_one());
    }

    #[test]
    fn inverses() {
        assert_eq!(FieldElement::ratio(1, 2).inv().unwrap(), FieldElement::from_int(2));
        let x = &FieldElement::ratio(1, 2) + &(&s(3) * &FieldElement::ratio(1, 2));
        let expected = &FieldElement::from_int(-1) + &s(3);
        assert_eq!(x.inv().unwrap(), expected);
        assert!((&x * &expected).is_one());
        let unit = &FieldElement::from_int(2) + &s(3);
        assert_eq!(unit.inv().unwrap(), &FieldElement::from_int(2) - &s(3));
        assert!(matches!(FieldElement::zero().inv(), Err(FieldError::DivisionByZero)));
    }

    #[test]
    fn inverse_over_three_primes() {
        let x = FieldElement::from_terms([
            (Radical::one(), q(1, 3)),
            (Radical::prime(2), q(2, 1)),
            (Radical::from_primes(vec![3, 5]), q(-1, 7)),
            (Radical::from_primes(vec![2, 3, 5]), q(5, 2)),
        ]);
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn square_roots_of_rationals() {
        let r = FieldElement::sqrt_rational(&q(2, 5)).unwrap();
        assert_eq!(r, FieldElement::from_term(Radical::from_primes(vec![2, 5]), q(1, 5)));
        let r = FieldElement::sqrt_rational(&q(10, 16)).unwrap();
        assert_eq!(r.square().as_rational(), Some(q(10, 16)));
        assert_eq!(r, FieldElement::from_term(Radical::from_primes(vec![2, 5]), q(1, 4)));
        assert_eq!(FieldElement::sqrt_rational(&q(4, 1)).unwrap(), FieldElement::from_int(2));
        assert!(matches!(
            FieldElement::sqrt_rational(&q(-3, 1)),
            Err(FieldError::NegativeRadicand(_))
        ));
        assert!(FieldElement::sqrt_rational(&Rational::zero()).is_err());
    }

    #[test]
    fn exact_signs() {
        // 7 - 4√3 ≈ 0.0718 > 0, 4√3 - 7 < 0, √2 + √3 - √10 ≈ -0.016 < 0
        let a = &FieldElement::from_int(7) - &(&FieldElement::from_int(4) * &s(3));
        assert_eq!(a.signum(), 1);
        assert_eq!((-&a).signum(), -1);
        let b = &(&s(2) + &s(3)) - &FieldElement::from_term(Radical::from_primes(vec![2, 5]), Rational::one());
        assert_eq!(b.signum(), -1);
        assert_eq!(FieldElement::zero().signum(), 0);
    }

    #[test]
    fn float_value_survives_cancellation() {
        let small = (&FieldElement::from_int(2) - &s(3)).pow(20).unwrap();
        let expected = (2.0 - 3f64.sqrt()).powi(20);
        assert!((small.to_f64() / expected - 1.0).abs() < 1e-9);
    }

    #[test]
    fn display() {
        let x = &FieldElement::ratio(-1, 2) + &(&s(3) * &FieldElement::ratio(3, 4));
        assert_eq!(x.to_string(), "-1/2 + 3/4*√3");
    }

    #[test]
    fn basis_validation() {
        assert!(PrimeRadicalBasis::new(vec![5, 2, 3]).is_ok());
        assert!(PrimeRadicalBasis::new(vec![2, 2]).is_err());
        assert!(PrimeRadicalBasis::new(vec![4]).is_err());
    }
}
