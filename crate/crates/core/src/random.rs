//! Seeded generators for test and benchmark inputs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dense::CMatrix;
use crate::hermitian::{HermitianMatrix, Projection};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Uniformly distributed unit vector in `C^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// GUE-like Hermitian matrix with unit-variance entries, scaled by `1/sqrt(n)`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    let data: Vec<Complex64> = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    let m = CMatrix::from_vec(n, data).scale(1.0 / (n as f64).sqrt());
    HermitianMatrix::from_cmatrix(&m)
}

/// Haar-like unitary from Gram-Schmidt on complex Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        // Two passes keep the basis orthonormal to working precision.
        for _ in 0..2 {
            for c in &cols {
                let dot: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= dot * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    CMatrix::from_columns(n, &cols)
}

/// `V diag(spectrum) V^H`.
pub fn with_spectrum_in(basis: &CMatrix, spectrum: &[f64]) -> HermitianMatrix {
    let n = basis.dim();
    let mut out = CMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &w) in spectrum.iter().enumerate() {
                if w != 0.0 {
                    acc += basis.get(i, k) * basis.get(j, k).conj() * w;
                }
            }
            out.set(i, j, acc);
            out.set(j, i, acc.conj());
        }
    }
    HermitianMatrix::from_cmatrix(&out)
}

/// Random Hermitian matrix with the given eigenvalues.
pub fn with_spectrum<R: Rng + ?Sized>(rng: &mut R, spectrum: &[f64]) -> HermitianMatrix {
    let v = random_unitary(rng, spectrum.len());
    with_spectrum_in(&v, spectrum)
}

/// `n` eigenvalues uniform in `[lo, hi]`.
pub fn uniform_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}

/// `n` eigenvalues in `[lo, hi]` with pairwise gaps at least `gap`; values
/// are placed on the grid `lo + k*gap` without repetition.
pub fn separated_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64, gap: f64) -> Vec<f64> {
    let slots = ((hi - lo) / gap).floor() as usize + 1;
    assert!(slots >= n, "not enough room for {n} separated eigenvalues");
    let mut picked = rand::seq::index::sample(rng, slots, n).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|k| lo + k as f64 * gap).collect()
}

/// Random projection of the given rank.
pub fn random_projection<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> Projection {
    let v = random_unitary(rng, n);
    let spectrum: Vec<f64> = (0..n).map(|k| if k < rank { 1.0 } else { 0.0 }).collect();
    Projection::from_matrix_unchecked(with_spectrum_in(&v, &spectrum))
}

/// Random projection of uniformly chosen rank in `0..=n`.
pub fn random_projection_any_rank<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Projection {
    let rank = rng.random_range(0..=n);
    random_projection(rng, n, rank)
}

/// Random effect with spectrum uniform in `[0, 1]`.
pub fn random_effect<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    let s = uniform_spectrum(rng, n, 0.0, 1.0);
    with_spectrum(rng, &s)
}

/// Random positive semidefinite matrix `A A^H / n`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    let data: Vec<Complex64> = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    let a = CMatrix::from_vec(n, data);
    HermitianMatrix::from_cmatrix(&a.matmul(&a.adjoint()).scale(1.0 / n as f64))
}

/// `c0 + c1 g + c2 g^2` with random real coefficients; commutes with `g`.
pub fn random_polynomial_in<R: Rng + ?Sized>(rng: &mut R, g: &HermitianMatrix) -> HermitianMatrix {
    let c: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
    (&g.scale(c[1]) + &g.square().scale(c[2])).shift(c[0])
}
