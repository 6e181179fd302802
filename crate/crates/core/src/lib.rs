//! Constructive operator calculus on finite-dimensional complex Hermitian
//! matrices.
//!
//! The Hermitian `n x n` matrices form a partially ordered real vector space
//! containing the effects `0 <= e <= 1` and, inside those, the orthogonal
//! projections. This crate computes square roots, carriers, positive and
//! negative parts, signum, polar decompositions, inverses and spectral
//! resolutions using only order-theoretic iterations (powers, monotone
//! limits, bisection on the order), and checks every result against an
//! independent Jacobi eigendecomposition in [`oracle`].
//!
//! ```
//! use hermitia::{calculus, HermitianMatrix, ToleranceConfig};
//!
//! let tol = ToleranceConfig::default();
//! let g = HermitianMatrix::diag(&[4.0, 9.0]);
//! let (root, report) = calculus::sqrt(&g, &tol).unwrap();
//! assert!(report.converged);
//! assert!(root.max_abs_diff(&HermitianMatrix::diag(&[2.0, 3.0])) < 1e-9);
//! ```

pub mod axioms;
pub mod blocks;
pub mod calculus;
pub mod config;
pub mod dense;
pub mod error;
pub mod hermitian;
pub mod json;
pub mod lattice;
pub mod oracle;
pub mod random;
pub mod spectral;
pub mod states;

pub use calculus::{IterationReport, PolarParts};
pub use config::{Method, ToleranceConfig};
pub use dense::{CMatrix, ComplexScalar};
pub use error::{Error, Result};
pub use hermitian::{
    commutes, is_effect, is_projection, jordan_product, loewner_leq, make_hermitian, Construction, Effect,
    HermitianMatrix, Projection, MAX_DIM,
};
pub use oracle::EigenDecomposition;
pub use spectral::{Partition, SpectralBounds, SpectralResolution};
