//! Ground-truth kernel: cyclic Jacobi eigensolver for complex Hermitian
//! matrices and eigendecomposition-based reference values.
//!
//! Everything here is independent of the order-theoretic iterations in
//! [`crate::calculus`]; tests compare the two routes against each other.

use num_complex::Complex64;

use crate::config::ToleranceConfig;
use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, Projection};

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Relative off-diagonal Frobenius mass at which the sweeps stop.
const OFF_DIAGONAL_TARGET: f64 = 1e-13;

/// Eigenvalues in ascending order with matching unitary eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(f(lambda_i)) V^H`.
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
        let n = self.dim();
        let values: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::DomainError(format!(
                "function is not finite at eigenvalue {}",
                self.eigenvalues[bad]
            )));
        }
        let v = &self.eigenvectors;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &w) in values.iter().enumerate() {
                    if w != 0.0 {
                        acc += v.get(i, k) * v.get(j, k).conj() * w;
                    }
                }
                out.set(i, j, acc);
                out.set(j, i, acc.conj());
            }
        }
        Ok(HermitianMatrix::from_cmatrix(&out))
    }

    /// Orthogonal projector onto the span of the selected eigenvectors.
    pub fn projector(&self, indices: &[usize]) -> HermitianMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for &k in indices {
                    acc += v.get(i, k) * v.get(j, k).conj();
                }
                out.set(i, j, acc);
                out.set(j, i, acc.conj());
            }
        }
        HermitianMatrix::from_cmatrix(&out)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// `max |lambda_i|`.
    pub fn norm(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }
}

/// Runs cyclic Jacobi sweeps in place. Returns the number of sweeps used and
/// whether the off-diagonal target was met.
fn jacobi(a: &mut CMatrix, mut v: Option<&mut CMatrix>) -> (usize, bool) {
    let n = a.dim();
    let scale = a.frobenius_norm();
    if scale == 0.0 || n == 1 {
        return (0, true);
    }
    let target = OFF_DIAGONAL_TARGET * scale;
    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a.get(i, j).norm_sqr();
                }
            }
        }
        if off.sqrt() <= target {
            return (sweep, true);
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(a, v.as_deref_mut(), p, q);
            }
        }
    }
    (MAX_SWEEPS, false)
}

/// Annihilates `a[p][q]` with a 2x2 unitary acting on columns and rows `p`, `q`.
fn rotate(a: &mut CMatrix, v: Option<&mut CMatrix>, p: usize, q: usize) {
    let n = a.dim();
    let apq = a.get(p, q);
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let phase = apq / mag;
    let phase_conj = phase.conj();

    // The phase change diag(1, e^{-i phi}) makes the pair real symmetric,
    // then a classical Jacobi rotation diagonalizes it.
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // Columns: A <- A W with W = [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
    let data = a.as_mut_slice();
    for k in 0..n {
        let akp = data[k * n + p];
        let akq = data[k * n + q];
        data[k * n + p] = akp * c - akq * phase_conj * s;
        data[k * n + q] = akp * s + akq * phase_conj * c;
    }
    // Rows: A <- W^H A.
    for k in 0..n {
        let apk = data[p * n + k];
        let aqk = data[q * n + k];
        data[p * n + k] = apk * c - aqk * phase * s;
        data[q * n + k] = apk * s + aqk * phase * c;
    }
    data[p * n + q] = Complex64::new(0.0, 0.0);
    data[q * n + p] = Complex64::new(0.0, 0.0);
    data[p * n + p] = Complex64::new(data[p * n + p].re, 0.0);
    data[q * n + q] = Complex64::new(data[q * n + q].re, 0.0);

    if let Some(v) = v {
        let vd = v.as_mut_slice();
        for k in 0..n {
            let vkp = vd[k * n + p];
            let vkq = vd[k * n + q];
            vd[k * n + p] = vkp * c - vkq * phase_conj * s;
            vd[k * n + q] = vkp * s + vkq * phase_conj * c;
        }
    }
}

fn sorted(a: &CMatrix, v: &CMatrix) -> EigenDecomposition {
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.total_cmp(&a.get(j, j).re));
    let eigenvalues = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut eigenvectors = CMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors.set(k, new, v.get(k, old));
        }
    }
    EigenDecomposition { eigenvalues, eigenvectors }
}

/// Full eigendecomposition with ascending eigenvalues.
pub fn eig(g: &HermitianMatrix) -> Result<EigenDecomposition> {
    let mut a = g.as_cmatrix().clone();
    let mut v = CMatrix::identity(g.dim());
    let (_, converged) = jacobi(&mut a, Some(&mut v));
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    Ok(sorted(&a, &v))
}

/// Ascending eigenvalues. Never fails: if the sweep cap were reached the
/// current diagonal is returned, which is accurate to the remaining
/// off-diagonal mass.
pub fn eigenvalues(g: &HermitianMatrix) -> Vec<f64> {
    let mut a = g.as_cmatrix().clone();
    jacobi(&mut a, None);
    let mut vals: Vec<f64> = (0..g.dim()).map(|i| a.get(i, i).re).collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// `V diag(f(lambda_i)) V^H`.
pub fn apply_scalar_function(g: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    eig(g)?.reconstruct(f)
}

/// Eigenvalues with modulus at most `tol.psd * (1 + scale)` count as zero.
pub fn zero_threshold(tol: &ToleranceConfig, scale: f64) -> f64 {
    tol.psd * (1.0 + scale)
}

pub fn sqrt(g: &HermitianMatrix, tol: &ToleranceConfig) -> Result<HermitianMatrix> {
    let dec = eig(g)?;
    let thr = zero_threshold(tol, dec.norm());
    if dec.min() < -thr {
        return Err(Error::DomainError(format!(
            "square root of negative eigenvalue {}",
            dec.min()
        )));
    }
    dec.reconstruct(|x| x.max(0.0).sqrt())
}

pub fn abs(g: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_scalar_function(g, f64::abs)
}

pub fn pos_part(g: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_scalar_function(g, |x| x.max(0.0))
}

pub fn neg_part(g: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_scalar_function(g, |x| (-x).max(0.0))
}

/// Sign of each eigenvalue, with eigenvalues inside the zero threshold mapped to 0.
pub fn signum(g: &HermitianMatrix, tol: &ToleranceConfig, scale: f64) -> Result<HermitianMatrix> {
    let thr = zero_threshold(tol, scale);
    apply_scalar_function(g, |x| {
        if x > thr {
            1.0
        } else if x < -thr {
            -1.0
        } else {
            0.0
        }
    })
}

/// Projector onto the eigenvectors whose eigenvalue exceeds the zero threshold in modulus.
pub fn carrier(g: &HermitianMatrix, tol: &ToleranceConfig, scale: f64) -> Result<Projection> {
    let dec = eig(g)?;
    let thr = zero_threshold(tol, scale);
    let idx: Vec<usize> = (0..dec.dim()).filter(|&i| dec.eigenvalues[i].abs() > thr).collect();
    Ok(indicator(&dec, &idx))
}

/// `1 - ((g - lambda)^+)°`: projector onto eigenvalues `<= lambda`.
pub fn spectral_projection(g: &HermitianMatrix, lambda: f64, tol: &ToleranceConfig) -> Result<Projection> {
    let dec = eig(g)?;
    let thr = zero_threshold(tol, dec.norm());
    let idx: Vec<usize> = (0..dec.dim()).filter(|&i| dec.eigenvalues[i] - lambda <= thr).collect();
    Ok(indicator(&dec, &idx))
}

/// `1 - (g - lambda)°`: projector onto eigenvalues equal to `lambda`.
pub fn eigenprojection(g: &HermitianMatrix, lambda: f64, tol: &ToleranceConfig) -> Result<Projection> {
    let dec = eig(g)?;
    let thr = zero_threshold(tol, dec.norm());
    let idx: Vec<usize> = (0..dec.dim())
        .filter(|&i| (dec.eigenvalues[i] - lambda).abs() <= thr)
        .collect();
    Ok(indicator(&dec, &idx))
}

pub fn inverse(g: &HermitianMatrix) -> Result<HermitianMatrix> {
    apply_scalar_function(g, |x| 1.0 / x)
}

fn indicator(dec: &EigenDecomposition, idx: &[usize]) -> Projection {
    let n = dec.dim();
    if idx.is_empty() {
        return Projection::zero(n);
    }
    if idx.len() == n {
        return Projection::identity(n);
    }
    Projection::from_matrix_unchecked(dec.projector(idx))
}
