use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{FieldElement, FieldError, PrimeRadicalBasis};

/// Dense square matrix over a multiquadratic field, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    dim: usize,
    entries: Vec<FieldElement>,
}

impl ExactMatrix {
    pub fn from_entries(dim: usize, entries: Vec<FieldElement>) -> Result<Self, FieldError> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(FieldError::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self, FieldError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(FieldError::DimensionMismatch {
                expected: dim,
                found: rows.iter().map(Vec::len).find(|&l| l != dim).unwrap_or(0),
            });
        }
        Self::from_entries(dim, rows.into_iter().flatten().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, FieldError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| FieldElement::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![FieldElement::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal((0..dim).map(|_| FieldElement::one()).collect())
    }

    pub fn diagonal(diag: Vec<FieldElement>) -> Self {
        let dim = diag.len();
        let mut m = Self::zero(dim);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * dim + i] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &FieldElement {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: FieldElement) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn row(&self, row: usize) -> &[FieldElement] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn column(&self, col: usize) -> Vec<FieldElement> {
        (0..self.dim).map(|r| self.get(r, col).clone()).collect()
    }

    /// Union of the radical bases of all entries.
    pub fn basis(&self) -> PrimeRadicalBasis {
        self.entries
            .iter()
            .fold(PrimeRadicalBasis::default(), |acc, e| acc.union(&e.basis()))
    }

    fn check_dim(&self, other: &Self) -> Result<(), FieldError> {
        if self.dim != other.dim {
            return Err(FieldError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = FieldElement::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(Self { dim: n, entries })
    }

    pub fn scale(&self, factor: &FieldElement) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).clone());
            }
        }
        Self { dim: n, entries }
    }

    pub fn trace(&self) -> FieldElement {
        (0..self.dim).fold(FieldElement::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn diagonal_entries(&self) -> Vec<FieldElement> {
        (0..self.dim).map(|i| self.get(i, i).clone()).collect()
    }

    /// Sylvester's criterion on a symmetric matrix: every leading principal minor is positive.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        (1..=self.dim).all(|k| self.leading_minor(k).is_positive())
    }

    fn leading_minor(&self, k: usize) -> FieldElement {
        let entries = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Self { dim: k, entries }.det()
    }

    /// Determinant: cofactor expansion up to 3×3, fraction-free elimination beyond.
    pub fn det(&self) -> FieldElement {
        let m = |i: usize, j: usize| self.get(i, j);
        match self.dim {
            1 => m(0, 0).clone(),
            2 => &(m(0, 0) * m(1, 1)) - &(m(0, 1) * m(1, 0)),
            3 => {
                let a = m(0, 0) * &(&(m(1, 1) * m(2, 2)) - &(m(1, 2) * m(2, 1)));
                let b = m(0, 1) * &(&(m(1, 0) * m(2, 2)) - &(m(1, 2) * m(2, 0)));
                let c = m(0, 2) * &(&(m(1, 0) * m(2, 1)) - &(m(1, 1) * m(2, 0)));
                &(&a - &b) + &c
            }
            _ => self.bareiss_det(),
        }
    }

    fn bareiss_det(&self) -> FieldElement {
        let n = self.dim;
        let mut a: Vec<Vec<FieldElement>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = FieldElement::one();
        let mut prev = FieldElement::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return FieldElement::zero(),
                }
            }
            let prev_inv = prev.inv().expect("Bareiss pivot is nonzero");
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = &num * &prev_inv;
                }
                a[i][k] = FieldElement::zero();
            }
            prev = a[k][k].clone();
        }
        &sign * &a[n - 1][n - 1]
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inv(&self) -> Result<Self, FieldError> {
        let n = self.dim;
        let mut a: Vec<Vec<FieldElement>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut b: Vec<Vec<FieldElement>> = (0..n).map(|i| Self::identity(n).row(i).to_vec()).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(FieldError::Singular)?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            let inv = a[col][col].inv()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &inv;
                b[col][j] = &b[col][j] * &inv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    let da = &factor * &a[col][j];
                    let db = &factor * &b[col][j];
                    a[r][j] = &a[r][j] - &da;
                    b[r][j] = &b[r][j] - &db;
                }
            }
        }
        Self::from_rows(b)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, exp: i64) -> Result<Self, FieldError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::identity(self.dim);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.try_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// `P·self·P⁻¹`.
    pub fn conjugate_by(&self, p: &Self) -> Result<Self, FieldError> {
        p.try_mul(self)?.try_mul(&p.inv()?)
    }

    /// Additive commutator `AB − BA`; zero exactly when the matrices commute.
    pub fn commutator(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool, FieldError> {
        Ok(self.commutator(other)?.is_zero())
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &FieldElement)> {
        self.entries
            .iter()
            .enumerate()
            .find(|(_, e)| !e.is_zero())
            .map(|(k, e)| (k / self.dim, k % self.dim, e))
    }

    /// Entrywise reduction into `{0, …, p−1}`; every entry must be an integer.
    pub fn mod_p(&self, p: u64) -> Result<Vec<Vec<u64>>, FieldError> {
        let modulus = BigInt::from(p);
        let n = self.dim;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let value = self.get(i, j).as_integer().ok_or_else(|| FieldError::NonIntegralEntry {
                    row: i,
                    col: j,
                    value: self.get(i, j).to_string(),
                })?;
                row.push(value.mod_floor(&modulus).to_u64().expect("residue below p"));
            }
            rows.push(row);
        }
        Ok(rows)
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
        if v.len() != self.dim {
            return Err(FieldError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(FieldElement::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.row(i).iter().map(FieldElement::to_f64).collect()).collect()
    }

    /// Kernel basis by reduced row echelon form; each vector has its first nonzero entry equal to 1.
    pub fn null_space(&self) -> Vec<Vec<FieldElement>> {
        let n = self.dim;
        let mut a: Vec<Vec<FieldElement>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let inv = a[row][col].inv().expect("nonzero pivot");
            for x in a[row].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != row && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    let pivot = a[row].clone();
                    for (x, y) in a[r].iter_mut().zip(&pivot) {
                        *x = &*x - &(&factor * y);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == n {
                break;
            }
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![FieldElement::zero(); n];
                v[f] = FieldElement::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&a[r][f];
                }
                let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero kernel vector").inv().expect("nonzero");
                v.iter().map(|x| x * &lead).collect()
            })
            .collect()
    }

    /// Builds a matrix from columns.
    pub fn from_columns(cols: &[Vec<FieldElement>]) -> Result<Self, FieldError> {
        let n = cols.len();
        let rows = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        Self::from_rows(rows)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix{}x{}\n{self}", self.dim, self.dim)
    }
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    /// Panics on dimension mismatch; use [`ExactMatrix::try_mul`] otherwise.
    fn mul(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("matrix dimensions agree")
    }
}

impl<'a> Add<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        self.try_add(rhs).expect("matrix dimensions agree")
    }
}

impl<'a> Sub<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        self.try_sub(rhs).expect("matrix dimensions agree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    fn s3() -> FieldElement {
        FieldElement::sqrt_prime(3)
    }

    fn so32_t0() -> ExactMatrix {
        let mut m = ExactMatrix::identity(5);
        m.set(0, 0, fe(2));
        m.set(3, 3, fe(2));
        m.set(0, 3, s3());
        m.set(3, 0, s3());
        m
    }

    fn a1(n: i64) -> ExactMatrix {
        let mut m = ExactMatrix::identity(5);
        m.set(0, 0, fe(n));
        m.set(0, 1, fe(n - 1));
        m.set(1, 0, fe(n + 1));
        m.set(1, 1, fe(n));
        m
    }

    #[test]
    fn t0_squared_block() {
        // (2+√3)² = 7+4√3 appears on the (0,3) block; direct multiplication is the oracle.
        let sq = &so32_t0() * &so32_t0();
        let four_s3 = &fe(4) * &s3();
        assert_eq!(sq.get(0, 0), &fe(7));
        assert_eq!(sq.get(3, 3), &fe(7));
        assert_eq!(sq.get(0, 3), &four_s3);
        assert_eq!(sq.get(3, 0), &four_s3);
        assert_eq!(sq.get(1, 1), &fe(1));
    }

    #[test]
    fn determinants() {
        let half = FieldElement::ratio(1, 2);
        let hs3 = &half * &s3();
        let r1 = ExactMatrix::from_rows(vec![
            vec![fe(1), fe(0), fe(0)],
            vec![fe(0), half.clone(), hs3.clone()],
            vec![fe(0), -&hs3, half],
        ])
        .unwrap();
        assert!(r1.det().is_one());
        assert!(so32_t0().det().is_one());
        assert!(a1(7).det().is_one());
        let singular = ExactMatrix::from_ints(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 0, 1], &[5, 0, 0, 1]]).unwrap();
        assert!(singular.det().is_zero());
        let m = ExactMatrix::from_ints(&[&[0, 2, 0, 0], &[1, 0, 0, 0], &[0, 0, 3, 1], &[0, 0, 1, 1]]).unwrap();
        assert_eq!(m.det(), fe(-4));
    }

    #[test]
    fn inverse_of_sl5_block() {
        let inv = a1(2).inv().unwrap();
        let expected = {
            let mut m = ExactMatrix::identity(5);
            m.set(0, 0, fe(2));
            m.set(0, 1, fe(-1));
            m.set(1, 0, fe(-3));
            m.set(1, 1, fe(2));
            m
        };
        assert_eq!(inv, expected);
        assert!((&a1(2) * &inv).is_identity());
        assert_eq!(ExactMatrix::identity(3).inv().unwrap(), ExactMatrix::identity(3));
        assert!(matches!(ExactMatrix::zero(2).inv(), Err(FieldError::Singular)));
    }

    #[test]
    fn commutators() {
        let d1 = ExactMatrix::diagonal(vec![FieldElement::ratio(1, 4), fe(2), fe(2)]);
        let d2 = ExactMatrix::diagonal(vec![fe(2), FieldElement::ratio(1, 4), fe(2)]);
        assert!(d1.commutator(&d2).unwrap().is_zero());
        assert!(d1.commutator(&ExactMatrix::identity(5)).is_err());
    }

    #[test]
    fn powers() {
        let sq = a1(2).pow(2).unwrap();
        assert_eq!(sq.get(0, 0), &fe(7));
        assert_eq!(sq.get(0, 1), &fe(4));
        assert_eq!(sq.get(1, 0), &fe(12));
        assert!(a1(2).pow(-3).unwrap().try_mul(&a1(2).pow(3).unwrap()).unwrap().is_identity());
        assert!(ExactMatrix::zero(2).pow(-1).is_err());
    }

    #[test]
    fn reduction_mod_p() {
        assert_eq!(
            a1(2).mod_p(3).unwrap()[..2],
            [vec![2, 1, 0, 0, 0], vec![0, 2, 0, 0, 0]]
        );
        let id = ExactMatrix::identity(5).mod_p(5).unwrap();
        assert!((0..5).all(|i| (0..5).all(|j| id[i][j] == u64::from(i == j))));
        assert!(matches!(so32_t0().mod_p(7), Err(FieldError::NonIntegralEntry { row: 0, col: 3, .. })));
        let neg = ExactMatrix::from_ints(&[&[-1, 0], &[0, -1]]).unwrap();
        assert_eq!(neg.mod_p(5).unwrap(), vec![vec![4, 0], vec![0, 4]]);
    }

    #[test]
    fn null_space_of_eigen_shift() {
        // [[2,1],[3,2]] − (2+√3)I has kernel spanned by (1, √3).
        let lambda = &fe(2) + &s3();
        let m = ExactMatrix::from_rows(vec![vec![&fe(2) - &lambda, fe(1)], vec![fe(3), &fe(2) - &lambda]]).unwrap();
        let ns = m.null_space();
        assert_eq!(ns, vec![vec![fe(1), s3()]]);
    }

    #[test]
    fn positive_definiteness() {
        assert!(so32_t0().is_positive_definite());
        assert!(!a1(2).is_positive_definite());
        assert!(!ExactMatrix::diagonal(vec![fe(-1), fe(-1)]).is_positive_definite());
    }
}
