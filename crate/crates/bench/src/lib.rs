//! Fixed inputs shared by the benchmarks.

use hermitia::random;
use hermitia::HermitianMatrix;

/// Positive matrix with spectrum uniform in `[0.05, 1]`.
pub fn positive(n: usize, seed: u64) -> HermitianMatrix {
    let mut rng = random::rng(seed);
    let s = random::uniform_spectrum(&mut rng, n, 0.05, 1.0);
    random::with_spectrum(&mut rng, &s)
}

/// Matrix with a kernel of dimension `n / 2`.
pub fn singular(n: usize, seed: u64) -> HermitianMatrix {
    let mut rng = random::rng(seed);
    let s: Vec<f64> = (0..n).map(|k| if k < n / 2 { 0.0 } else { 0.5 + k as f64 / n as f64 }).collect();
    random::with_spectrum(&mut rng, &s)
}

/// Generic indefinite matrix.
pub fn generic(n: usize, seed: u64) -> HermitianMatrix {
    random::random_hermitian(&mut random::rng(seed), n)
}
