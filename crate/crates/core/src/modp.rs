//! Word-sized modular arithmetic and reduction of field elements modulo a prime.
//!
//! A prime `P` for which every adjoined `p` is a quadratic residue admits a ring
//! homomorphism `ℤ_(P)[√p₁,…,√p_k] → 𝔽_P` sending each `√p` to a fixed square root
//! mod `P`. If the image of a matrix differs from the identity, the matrix itself
//! does; this is what the faithfulness sweep relies on.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::exactfield::{ExactMatrix, FieldElement};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Square root mod an odd prime by Tonelli–Shanks; `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Inverse mod a prime via Fermat.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// A prime together with chosen square roots of the adjoined primes.
#[derive(Clone, Debug)]
pub struct ModularImage {
    prime: u64,
    roots: BTreeMap<u64, u64>,
}

impl ModularImage {
    /// Finds the largest prime below `start` in which every radical prime is a nonzero square.
    pub fn below(start: u64, radicals: &[u64]) -> Self {
        let mut candidate = start | 1;
        loop {
            candidate -= 2;
            if !is_prime(candidate) {
                continue;
            }
            let mut roots = BTreeMap::new();
            let ok = radicals.iter().all(|&r| {
                r % candidate != 0
                    && match sqrt_mod(r, candidate) {
                        Some(s) => {
                            roots.insert(r, s);
                            true
                        }
                        None => false,
                    }
            });
            if ok {
                return Self { prime: candidate, roots };
            }
        }
    }

    /// A prime near 2³¹ (so products fit in `u64`) compatible with the given matrices.
    pub fn for_matrices<'a, I: IntoIterator<Item = &'a ExactMatrix> + Clone>(mats: I) -> Self {
        let mut radicals: Vec<u64> = mats
            .clone()
            .into_iter()
            .flat_map(|m| m.basis().primes().to_vec())
            .collect();
        radicals.sort_unstable();
        radicals.dedup();
        let mut start = 1u64 << 31;
        loop {
            let image = Self::below(start, &radicals);
            let all_defined = mats.clone().into_iter().all(|m| m.entries().iter().all(|e| image.reduce(e).is_some()));
            if all_defined {
                return image;
            }
            start = image.prime;
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Image of a field element, or `None` when a denominator vanishes mod the prime.
    pub fn reduce(&self, x: &FieldElement) -> Option<u64> {
        let p = self.prime;
        let mut acc = 0u64;
        for (radical, q) in x.terms() {
            let num = bigint_mod(q.numer(), p);
            let den = bigint_mod(q.denom(), p);
            if den.is_zero() {
                return None;
            }
            let mut term = mul_mod(num, inv_mod(den, p)?, p);
            for prime in radical.primes() {
                term = mul_mod(term, *self.roots.get(prime)?, p);
            }
            acc = (acc + term) % p;
        }
        Some(acc)
    }

    /// Row-major image of a matrix.
    pub fn reduce_matrix(&self, m: &ExactMatrix) -> Option<Vec<u64>> {
        m.entries().iter().map(|e| self.reduce(e)).collect()
    }
}
