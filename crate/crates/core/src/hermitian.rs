//! Hermitian matrices, the Loewner order, and the nested classes of
//! projections inside effects inside Hermitian elements.

use std::ops::{Add, Deref, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::json::MatrixDoc;
use crate::oracle;

/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

/// How [`make_hermitian`] treats asymmetric input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Construction {
    /// Symmetrize silently.
    #[default]
    Lenient,
    /// Reject input whose asymmetry exceeds `tol.sym` before symmetrizing.
    Strict,
}

/// Dense complex Hermitian matrix. Entries satisfy `a[i][j] == conj(a[j][i])`
/// exactly and the diagonal is exactly real.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixDoc", into = "MatrixDoc")]
pub struct HermitianMatrix {
    inner: CMatrix,
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        Err(Error::UnsupportedDimension(n))
    } else {
        Ok(())
    }
}

/// Validates and symmetrizes raw input to `(A + A^H) / 2`.
pub fn make_hermitian(
    raw: &CMatrix,
    mode: Construction,
    tol: &ToleranceConfig,
) -> Result<HermitianMatrix> {
    let n = raw.dim();
    check_dim(n)?;
    for i in 0..n {
        for j in 0..n {
            let z = raw.get(i, j);
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFiniteEntry { row: i, col: j });
            }
        }
    }
    if mode == Construction::Strict {
        let deviation = raw.hermitian_deviation();
        let scale = 1.0 + raw.max_abs();
        if deviation > tol.sym * scale {
            return Err(Error::NotHermitian { deviation, tolerance: tol.sym * scale });
        }
    }
    Ok(HermitianMatrix { inner: raw.hermitian_part() })
}

impl HermitianMatrix {
    /// Lenient construction from row-major entries.
    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::NonSquare { n, len: entries.len() });
        }
        make_hermitian(&CMatrix::from_vec(n, entries), Construction::Lenient, &ToleranceConfig::default())
    }

    /// Lenient construction from real rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::NonSquare { n, len: n * row.len() });
            }
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_entries(n, entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self { inner: CMatrix::zeros(n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: CMatrix::identity(n) }
    }

    pub fn scalar(n: usize, c: f64) -> Self {
        Self::identity(n).scale(c)
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = CMatrix::zeros(n);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        Self { inner: m }
    }

    /// Symmetrizes an arbitrary complex matrix without validation.
    pub(crate) fn from_cmatrix(m: &CMatrix) -> Self {
        Self { inner: m.hermitian_part() }
    }

    /// Projector `v v^H / (v^H v)` onto the span of `v`.
    pub fn rank_one(v: &[Complex64]) -> Self {
        let n = v.len();
        let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, v[i] * v[j].conj() / norm_sqr);
            }
        }
        Self::from_cmatrix(&m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner.get(i, j)
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn entries(&self) -> &[Complex64] {
        self.inner.as_slice()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { inner: self.inner.scale(s) }
    }

    /// `self + c * 1`.
    pub fn shift(&self, c: f64) -> Self {
        let mut m = self.inner.clone();
        for i in 0..self.dim() {
            let z = m.get(i, i);
            m.set(i, i, Complex64::new(z.re + c, 0.0));
        }
        Self { inner: m }
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        (-self).shift(1.0)
    }

    /// The ordinary (generally non-Hermitian) product.
    pub fn product(&self, rhs: &HermitianMatrix) -> CMatrix {
        self.inner.matmul(&rhs.inner)
    }

    /// Hermitian part of `self * rhs`; equals the product when the factors commute.
    pub fn product_sym(&self, rhs: &HermitianMatrix) -> Self {
        Self::from_cmatrix(&self.product(rhs))
    }

    pub fn square(&self) -> Self {
        Self::from_cmatrix(&self.product(self))
    }

    /// `self * middle * self`.
    pub fn sandwich(&self, middle: &HermitianMatrix) -> Self {
        Self::from_cmatrix(&self.inner.matmul(&middle.inner).matmul(&self.inner))
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    /// Operator norm `max |eigenvalue|`, which is the order-unit norm on this model.
    pub fn norm(&self) -> f64 {
        oracle::eigenvalues(self).iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    /// Largest entrywise deviation.
    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        (&self.inner - &other.inner).max_abs()
    }

    /// Operator norm of `self - other`.
    pub fn dist(&self, other: &HermitianMatrix) -> f64 {
        (self - other).norm()
    }

    /// Operator norm of the commutator `[self, other]`.
    pub fn commutator_norm(&self, other: &HermitianMatrix) -> f64 {
        let c = &self.product(other) - &other.product(self);
        // i[g, h] is Hermitian with the same singular values as [g, h].
        let ic = c.scale_complex(Complex64::new(0.0, 1.0));
        Self::from_cmatrix(&ic).norm()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub(crate) fn ensure_same_dim(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() })
        }
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { inner: &self.inner + &rhs.inner }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { inner: &self.inner - &rhs.inner }
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        HermitianMatrix { inner: -&self.inner }
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

/// `a <= b` in the Loewner order: the smallest eigenvalue of `b - a` is at
/// least `-tol.psd * (1 + ||b - a||)`.
pub fn loewner_leq(a: &HermitianMatrix, b: &HermitianMatrix, tol: &ToleranceConfig) -> Result<bool> {
    a.ensure_same_dim(b)?;
    let eig = oracle::eigenvalues(&(b - a));
    let lo = eig[0];
    let norm = eig.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    Ok(lo >= -tol.psd * (1.0 + norm))
}

/// `0 <= g` in the Loewner order.
pub fn is_positive(g: &HermitianMatrix, tol: &ToleranceConfig) -> bool {
    let eig = oracle::eigenvalues(g);
    let norm = eig.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    eig[0] >= -tol.psd * (1.0 + norm)
}

/// `||gh - hg|| <= tol.comm * (1 + ||g||) * (1 + ||h||)`.
pub fn commutes(g: &HermitianMatrix, h: &HermitianMatrix, tol: &ToleranceConfig) -> Result<bool> {
    g.ensure_same_dim(h)?;
    let c = g.commutator_norm(h);
    Ok(c <= tol.comm * (1.0 + g.norm()) * (1.0 + h.norm()))
}

/// `(gh + hg) / 2`.
pub fn jordan_product(g: &HermitianMatrix, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    g.ensure_same_dim(h)?;
    let gh = g.product(h);
    let hg = h.product(g);
    Ok(HermitianMatrix::from_cmatrix(&(&gh + &hg).scale(0.5)))
}

/// `0 <= g <= 1` within `tol.psd`.
pub fn is_effect(g: &HermitianMatrix, tol: &ToleranceConfig) -> bool {
    let eig = oracle::eigenvalues(g);
    eig[0] >= -tol.psd && eig[eig.len() - 1] <= 1.0 + tol.psd
}

/// Idempotent Hermitian element within `tol.proj`, cross-checked through
/// the power characterization `p^2 = p^3`.
pub fn is_projection(g: &HermitianMatrix, tol: &ToleranceConfig) -> bool {
    let eig = oracle::eigenvalues(g);
    if !eig.iter().all(|&x| x.abs() <= tol.proj || (x - 1.0).abs() <= tol.proj) {
        return false;
    }
    let p2 = g.square();
    let p3 = HermitianMatrix::from_cmatrix(&p2.product(g));
    p2.dist(g) <= tol.proj && p3.dist(&p2) <= tol.proj
}

/// Element of the effect interval `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Effect(HermitianMatrix);

impl Effect {
    pub fn new(g: HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let eig = oracle::eigenvalues(&g);
        let (lower, upper) = (eig[0], eig[eig.len() - 1]);
        if lower >= -tol.psd && upper <= 1.0 + tol.psd {
            Ok(Self(g))
        } else {
            Err(Error::NotAnEffect { lower, upper })
        }
    }

    /// Wraps an element already known to lie in `[0, 1]`.
    pub(crate) fn new_unchecked(g: HermitianMatrix) -> Self {
        Self(g)
    }

    pub fn into_inner(self) -> HermitianMatrix {
        self.0
    }
}

impl Deref for Effect {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.0
    }
}

/// Orthogonal projection. The complement `1 - p` is stored alongside so
/// that orthocomplementation is an exact involution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HermitianMatrix", into = "HermitianMatrix")]
pub struct Projection {
    p: HermitianMatrix,
    complement: HermitianMatrix,
}

impl Projection {
    /// Validates `g` as a projection without modifying it.
    pub fn new(g: HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        if is_projection(&g, tol) {
            Ok(Self::from_matrix_unchecked(g))
        } else {
            let eig = oracle::eigenvalues(&g);
            let (eigenvalue, distance) = worst_projection_eigenvalue(&eig);
            Err(Error::NotSnappable { eigenvalue, distance })
        }
    }

    pub(crate) fn from_matrix_unchecked(p: HermitianMatrix) -> Self {
        let complement = p.one_minus();
        Self { p, complement }
    }

    pub fn zero(n: usize) -> Self {
        Self { p: HermitianMatrix::zeros(n), complement: HermitianMatrix::identity(n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { p: HermitianMatrix::identity(n), complement: HermitianMatrix::zeros(n) }
    }

    /// Rounds a near-projection to an exact one: eigenvalues are thresholded
    /// at 1/2 and the matrix is rebuilt in its own eigenbasis. Fails when
    /// some eigenvalue is farther than `10 * tol.proj` from `{0, 1}`.
    pub fn snap(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let n = g.dim();
        let dec = oracle::eig(g)?;
        let limit = 10.0 * tol.proj;
        for &x in &dec.eigenvalues {
            let distance = x.abs().min((x - 1.0).abs());
            if !(distance <= limit) {
                return Err(Error::NotSnappable { eigenvalue: x, distance });
            }
        }
        let ones: Vec<usize> = (0..n).filter(|&i| dec.eigenvalues[i] > 0.5).collect();
        if ones.is_empty() {
            return Ok(Self::zero(n));
        }
        if ones.len() == n {
            return Ok(Self::identity(n));
        }
        let zeros: Vec<usize> = (0..n).filter(|&i| dec.eigenvalues[i] <= 0.5).collect();
        let p = dec.projector(&ones);
        let complement = dec.projector(&zeros);
        Ok(Self { p, complement })
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.p
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.p
    }

    /// `1 - p`.
    pub fn complement(&self) -> Projection {
        Self { p: self.complement.clone(), complement: self.p.clone() }
    }

    pub fn rank(&self) -> usize {
        self.p.trace().round().max(0.0) as usize
    }
}

fn worst_projection_eigenvalue(eig: &[f64]) -> (f64, f64) {
    eig.iter()
        .map(|&x| (x, x.abs().min((x - 1.0).abs())))
        .fold((0.0, 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
}

impl Deref for Projection {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.p
    }
}

impl From<Projection> for HermitianMatrix {
    fn from(p: Projection) -> Self {
        p.p
    }
}

impl TryFrom<HermitianMatrix> for Projection {
    type Error = Error;
    fn try_from(g: HermitianMatrix) -> Result<Self> {
        Projection::new(g, &ToleranceConfig::default())
    }
}
