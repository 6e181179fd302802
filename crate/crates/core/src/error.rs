use thiserror::Error;

/// Errors raised by the operator calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {len} entries cannot form an {n}x{n} matrix")]
    NonSquare { n: usize, len: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix is not Hermitian: deviation {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("dimension {0} is outside the supported range 1..={max}", max = crate::MAX_DIM)]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("element is not an effect: spectrum [{lower:e}, {upper:e}] leaves [0, 1]")]
    NotAnEffect { lower: f64, upper: f64 },

    #[error("element is not positive: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("element is not invertible: spectral lower bound {lower:e}")]
    NotInvertible { lower: f64 },

    #[error("iteration did not converge after {iterations} steps (residual {residual:e})")]
    MaxIterExceeded { iterations: usize, residual: f64 },

    #[error("candidate is not close to a projection: eigenvalue {eigenvalue:e} is {distance:e} from {{0, 1}}")]
    NotSnappable { eigenvalue: f64, distance: f64 },

    #[error("elements do not commute: commutator norm {residual:e}")]
    NotCommuting { residual: f64 },

    #[error("projection chain is not ascending at position {index}")]
    NotAscending { index: usize },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("function undefined on the spectrum: {0}")]
    DomainError(String),

    #[error("identity check failed for {what}: residual {residual:e}")]
    Inconsistent { what: &'static str, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
