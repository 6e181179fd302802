//! Vector states `ω(g) = <gψ, ψ>` and the order-unit norm.

use num_complex::Complex64;

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::oracle;
use crate::random;
use crate::spectral::spectral_bounds;

/// Unit vector `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorState {
    psi: Vec<Complex64>,
}

impl VectorState {
    /// Normalizes `psi`; rejects the zero vector and non-finite input.
    pub fn new(psi: Vec<Complex64>) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidArgument("state vector must be finite and nonzero".into()));
        }
        Ok(Self { psi: psi.into_iter().map(|z| z / norm).collect() })
    }

    /// The standard basis vector `e_k`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut psi = vec![Complex64::new(0.0, 0.0); n];
        psi[k] = Complex64::new(1.0, 0.0);
        Self { psi }
    }

    pub fn dim(&self) -> usize {
        self.psi.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.psi
    }
}

/// `ω_ψ(g) = <gψ, ψ>`.
pub fn evaluate(state: &VectorState, g: &HermitianMatrix) -> Result<f64> {
    if state.dim() != g.dim() {
        return Err(Error::DimensionMismatch { left: state.dim(), right: g.dim() });
    }
    let gpsi = g.as_cmatrix().mul_vec(&state.psi);
    Ok(state.psi.iter().zip(&gpsi).map(|(a, b)| (a.conj() * b).re).sum())
}

/// `inf{λ >= 0 : -λ1 <= g <= λ1} = max(|L|, |U|)`.
pub fn one_norm(g: &HermitianMatrix, tol: &ToleranceConfig) -> f64 {
    spectral_bounds(g, tol).norm()
}

/// Observed range of `ω(g)` over `samples` seeded random vector states and
/// the two extreme eigenvector states.
pub fn state_range(g: &HermitianMatrix, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let n = g.dim();
    let mut rng = random::rng(seed);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..samples {
        let s = VectorState { psi: random::unit_vector(&mut rng, n) };
        let v = evaluate(&s, g)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let dec = oracle::eig(g)?;
    for k in [0, n - 1] {
        let s = VectorState::new(dec.eigenvector(k))?;
        let v = evaluate(&s, g)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}
