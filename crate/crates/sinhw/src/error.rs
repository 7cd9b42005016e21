use thiserror::Error;

/// Errors produced by evaluation, geometry and continuation routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input lies outside the domain of the requested operation or branch.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluating exp would exceed the floating-point range.
    #[error("range error: {0}")]
    Range(String),

    /// The derivative vanishes (at or numerically near a critical point).
    #[error("singular derivative: {0}")]
    Singular(String),

    /// An iteration failed to reach its tolerance within its budget.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The parameter category does not support the requested operation.
    #[error("unsupported category: {0}")]
    Unsupported(String),

    /// A continuation path violates the path invariants.
    #[error("invalid path: {0}")]
    InvalidPath(String),

    /// A continuation step could not be re-projected onto f(w) = z.
    #[error("residual abort: {0}")]
    Residual(String),
}

pub type Result<T> = std::result::Result<T, Error>;
