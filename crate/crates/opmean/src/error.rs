use thiserror::Error;

/// Errors surfaced by the matrix kernels, means, norms, and checks.
///
/// `Domain` marks a violated mathematical hypothesis (the message names it);
/// callers that gate on preconditions turn it into a skip, never a failure.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },

    #[error("matrix is not symmetric: asymmetry {defect:.3e} exceeds {tol:.3e}")]
    NotSymmetric { defect: f64, tol: f64 },

    #[error("matrix is not positive definite: min eigenvalue {min_eig:.6e} (tolerance {tol:.3e})")]
    NotPositiveDefinite { min_eig: f64, tol: f64 },

    #[error("iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
