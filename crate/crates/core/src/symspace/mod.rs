//! Geodesics through the basepoint of `G/K`, encoded by their axial isometries.
//!
//! Two geodesics are adjacent when their chosen axial isometries commute. The 2-plane
//! they span inside a common flat is described by a [`FlatSpan`]: for each common
//! eigenvector, the integer linear form giving its log-eigenvalue along `a·H₁ + b·H₂`.

mod eigen;

use nalgebra::DMatrix;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::exactfield::{ExactMatrix, FieldElement, FieldError};

pub use eigen::{char_poly, common_eigenbasis, eigenvalues, log_pattern, LogPattern};
use eigen::recognize_rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrices do not commute")]
    NotCommuting,
    #[error("no common eigenbasis found")]
    NotDiagonalizable,
    #[error("unsupported extension: {0}")]
    UnsupportedExtension(String),
    #[error("eigenvalue {0} is not positive")]
    NonPositiveEigenvalue(String),
    #[error("eigenvalue {0} is not a rational power of the unit")]
    IncommensurableLogs(String),
    #[error("matrix is not an isometry: {0}")]
    NotIsometry(String),
    #[error("invalid flat span: {0}")]
    InvalidSpan(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    SpecialLinear(usize),
    Orthogonal(usize, usize),
}

/// The ambient group: `SL(n)` or `SO(p, q)` preserving `J = diag(1,…,1,−1,…,−1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupForm {
    kind: GroupKind,
    form: ExactMatrix,
}

impl GroupForm {
    pub fn special_linear(n: usize) -> Self {
        Self { kind: GroupKind::SpecialLinear(n), form: ExactMatrix::identity(n) }
    }

    pub fn orthogonal(p: usize, q: usize) -> Self {
        let diag = (0..p + q).map(|i| FieldElement::from_int(if i < p { 1 } else { -1 })).collect();
        Self { kind: GroupKind::Orthogonal(p, q), form: ExactMatrix::diagonal(diag) }
    }

    pub fn so32() -> Self {
        Self::orthogonal(3, 2)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn form_matrix(&self) -> &ExactMatrix {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn name(&self) -> String {
        match self.kind {
            GroupKind::SpecialLinear(n) => format!("SL({n})"),
            GroupKind::Orthogonal(p, q) => format!("SO({p},{q})"),
        }
    }

    /// `det M = 1` and, for orthogonal groups, `MᵀJM = J`.
    pub fn is_isometry(&self, m: &ExactMatrix) -> Result<bool, SymError> {
        if m.dim() != self.dim() {
            return Err(SymError::DimensionMismatch { expected: self.dim(), found: m.dim() });
        }
        if !m.det().is_one() {
            return Ok(false);
        }
        Ok(match self.kind {
            GroupKind::SpecialLinear(_) => true,
            GroupKind::Orthogonal(..) => m.transpose().try_mul(&self.form)?.try_mul(m)? == self.form,
        })
    }

    /// `XᵀJ + JX = 0`, membership of `X` in the Lie algebra.
    pub fn in_lie_algebra(&self, x: &ExactMatrix) -> Result<bool, SymError> {
        Ok(match self.kind {
            GroupKind::SpecialLinear(_) => x.trace().is_zero(),
            GroupKind::Orthogonal(..) => {
                x.transpose().try_mul(&self.form)?.try_add(&self.form.try_mul(x)?)?.is_zero()
            }
        })
    }
}

pub fn is_isometry(m: &ExactMatrix, form: &GroupForm) -> Result<bool, SymError> {
    form.is_isometry(m)
}

/// An axial isometry translating a geodesic through the basepoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transvection {
    matrix: ExactMatrix,
    form: GroupForm,
}

impl Transvection {
    /// Checks determinant one and form preservation. Symmetry is not required, since
    /// integer lattice generators translate along axes through the basepoint without
    /// being symmetric; see [`Transvection::is_symmetric_positive`].
    pub fn new(matrix: ExactMatrix, form: GroupForm) -> Result<Self, SymError> {
        if !form.is_isometry(&matrix)? {
            return Err(SymError::NotIsometry(format!("{} element expected", form.name())));
        }
        Ok(Self { matrix, form })
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn form(&self) -> &GroupForm {
        &self.form
    }

    pub fn into_matrix(self) -> ExactMatrix {
        self.matrix
    }

    /// Symmetric with all leading principal minors positive.
    pub fn is_symmetric_positive(&self) -> bool {
        self.matrix.is_positive_definite()
    }

    pub fn pow(&self, k: i64) -> Result<Self, SymError> {
        Ok(Self { matrix: self.matrix.pow(k)?, form: self.form.clone() })
    }
}

/// Geodesics are adjacent exactly when their axial isometries commute.
pub fn adjacent(a: &ExactMatrix, b: &ExactMatrix) -> Result<bool, SymError> {
    if a.dim() != b.dim() {
        return Err(SymError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(a.commutes_with(b)?)
}

/// Linear forms `(cᵢ, dᵢ)`, the log-eigenvalue on column `i` being `a·cᵢ + b·dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlatSpan {
    forms: Vec<(i64, i64)>,
}

impl FlatSpan {
    pub fn new(forms: Vec<(i64, i64)>) -> Result<Self, SymError> {
        if forms.is_empty() {
            return Err(SymError::InvalidSpan("no forms".into()));
        }
        let (sa, sb) = forms.iter().fold((0i64, 0i64), |(x, y), (c, d)| (x + c, y + d));
        if sa != 0 || sb != 0 {
            return Err(SymError::InvalidSpan(format!("forms sum to ({sa}, {sb}), not zero")));
        }
        Ok(Self { forms })
    }

    pub fn forms(&self) -> &[(i64, i64)] {
        &self.forms
    }

    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    /// Forms sorted, for comparison up to reordering of the eigenbasis.
    pub fn sorted_forms(&self) -> Vec<(i64, i64)> {
        let mut f = self.forms.clone();
        f.sort_unstable();
        f
    }

    fn value(&self, i: usize, a: i64, b: i64) -> i64 {
        a * self.forms[i].0 + b * self.forms[i].1
    }
}

/// Eigen-patterns of two commuting isometries in a shared eigenbasis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatFrame {
    pub basis: ExactMatrix,
    pub first: LogPattern,
    pub second: LogPattern,
    pub span: FlatSpan,
}

pub fn flat_frame(a: &ExactMatrix, b: &ExactMatrix) -> Result<FlatFrame, SymError> {
    let basis = common_eigenbasis(a, b)?;
    let first = log_pattern(a, &basis)?;
    let second = log_pattern(b, &basis)?;
    let span = FlatSpan::new(first.coeffs.iter().copied().zip(second.coeffs.iter().copied()).collect())?;
    Ok(FlatFrame { basis, first, second, span })
}

pub fn flat_span(a: &ExactMatrix, b: &ExactMatrix) -> Result<FlatSpan, SymError> {
    Ok(flat_frame(a, b)?.span)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SingularSet {
    /// Primitive integer directions `(a, b)`, one per line, first nonzero component positive.
    Finite(Vec<(i64, i64)>),
    Infinite,
}

impl SingularSet {
    pub fn count(&self) -> Option<usize> {
        match self {
            Self::Finite(lines) => Some(lines.len()),
            Self::Infinite => None,
        }
    }
}

fn primitive_direction(a: i64, b: i64) -> (i64, i64) {
    let g = a.gcd(&b);
    let (a, b) = (a / g, b / g);
    if a < 0 || (a == 0 && b < 0) {
        (-a, -b)
    } else {
        (a, b)
    }
}

/// Lines in the span where two eigen-pattern forms coincide.
pub fn singular_directions(span: &FlatSpan) -> SingularSet {
    let f = span.forms();
    let mut lines = Vec::new();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let (c, d) = (f[i].0 - f[j].0, f[i].1 - f[j].1);
            if c == 0 && d == 0 {
                return SingularSet::Infinite;
            }
            // a·c + b·d = 0 along (d, −c).
            lines.push(primitive_direction(d, -c));
        }
    }
    lines.sort_unstable();
    lines.dedup();
    SingularSet::Finite(lines)
}

/// Largest denominator accepted for the ratio of the two generator step lengths.
const STEP_RATIO_MAX_DEN: i64 = 1000;

/// For each singular line of the frame's span, exponents `(x, y)` such that `a^x·b^y`
/// translates along that line. Requires the step lengths of `a` and `b` to be
/// commensurable, which is confirmed exactly on the units.
pub fn singular_exponents(frame: &FlatFrame) -> Result<Vec<(i64, i64)>, SymError> {
    let SingularSet::Finite(lines) = singular_directions(&frame.span) else {
        return Err(SymError::InvalidSpan("infinitely many singular directions".into()));
    };
    let (fa, fb) = (&frame.first, &frame.second);
    if fa.is_trivial() || fb.is_trivial() {
        return Err(SymError::InvalidSpan("identity generator".into()));
    }
    // step_b / step_a = p / q
    let ratio = recognize_rational(fb.step() / fa.step(), STEP_RATIO_MAX_DEN, 1e-9)
        .ok_or_else(|| SymError::IncommensurableLogs(format!("{} vs {}", fa.unit, fb.unit)))?;
    let p = ratio.numer().to_i64().unwrap_or(0);
    let q = ratio.denom().to_i64().unwrap_or(0);
    if p <= 0 || q <= 0 || fb.unit.pow(q * fa.denom)? != fa.unit.pow(p * fb.denom)? {
        return Err(SymError::IncommensurableLogs(format!("{} vs {}", fa.unit, fb.unit)));
    }
    Ok(lines
        .into_iter()
        .map(|(alpha, beta)| {
            let (x, y) = (alpha * p, beta * q);
            let g = x.gcd(&y);
            (x / g, y / g)
        })
        .collect())
}

/// Smallest `t ≥ 1` with `(1, t)` regular, i.e. all forms pairwise distinct there.
pub fn regular_direction(span: &FlatSpan) -> Option<(i64, i64)> {
    let n = span.dim();
    let pairs = (n * n.saturating_sub(1) / 2) as i64;
    (1..=pairs + 1)
        .map(|t| (1, t))
        .find(|&(a, b)| (0..n).all(|i| (i + 1..n).all(|j| span.value(i, a, b) != span.value(j, a, b))))
}

/// A regular direction forces a unique maximal flat through the span.
pub fn flat_uniqueness(span: &FlatSpan) -> bool {
    regular_direction(span).is_some()
}

/// Whether two isometries translate along the same geodesic: they commute and their
/// log-eigen-patterns are proportional.
pub fn same_geodesic(a: &ExactMatrix, b: &ExactMatrix) -> Result<bool, SymError> {
    if !adjacent(a, b)? {
        return Ok(false);
    }
    let frame = flat_frame(a, b)?;
    let (x, y) = (&frame.first.coeffs, &frame.second.coeffs);
    if frame.first.is_trivial() || frame.second.is_trivial() {
        return Ok(frame.first.is_trivial() && frame.second.is_trivial());
    }
    let neg: Vec<i64> = y.iter().map(|c| -c).collect();
    Ok(x == y || *x == neg)
}

/// Basepoint displacement `sqrt(Σ log² sᵢ)` from the singular values `sᵢ` of `a`.
///
/// Singular values below 1 are taken as reciprocals of those of the exact inverse, so
/// high powers keep full relative precision at both ends of the spectrum.
pub fn displacement_numeric(a: &ExactMatrix) -> f64 {
    let mut up = log_singular_values(&a.to_f64_rows());
    let Ok(inv) = a.inv() else {
        return f64::INFINITY;
    };
    let mut down = log_singular_values(&inv.to_f64_rows());
    up.sort_by(|x, y| x.total_cmp(y));
    down.sort_by(|x, y| y.total_cmp(x));
    up.iter().zip(&down).map(|(&u, &d)| if u >= 0.0 { u * u } else { d * d }).sum::<f64>().sqrt()
}

fn log_singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let m = DMatrix::from_row_slice(n, n, &flat);
    m.singular_values().iter().map(|&s| s.max(f64::MIN_POSITIVE).ln()).collect()
}

/// [`displacement_numeric`] for a floating-point matrix given by rows, without the
/// inverse refinement.
pub fn displacement_of_rows(rows: &[Vec<f64>]) -> f64 {
    log_singular_values(rows).iter().map(|l| l * l).sum::<f64>().sqrt()
}
