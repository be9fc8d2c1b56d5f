use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A state vector had the wrong length or contained entries other than +1/-1.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A structurally invalid argument (bad node subset, non-positive tolerance, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A probability vector (or matrix row) whose mass is too far from 1 to renormalize.
    #[error("not normalized: sum = {sum} (must be within {tolerance} of 1)")]
    NotNormalized { sum: f64, tolerance: f64 },

    /// A negative probability entry.
    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },

    /// Absolute-continuity violation in a KL divergence: Q vanishes on the
    /// support of p(x) P(x, x'). Carries the offending transition.
    #[error("infinite divergence: Q({x},{x_next}) = 0 while p(x) P(x,{x_next}) > 0")]
    DivergenceInfinite { x: usize, x_next: usize },

    /// An iterative routine ran out of its iteration budget. `residual` is the
    /// convergence measure at the point of failure (marginal mismatch,
    /// stationarity residual, or duality gap, depending on the caller).
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    Convergence { iterations: usize, residual: f64 },

    /// A documented precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Text-format parse failure, with a 1-based line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
