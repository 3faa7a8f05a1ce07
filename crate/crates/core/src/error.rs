//! Crate-wide error type.

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the toolkit.
///
/// `Parameter` covers rejected inputs (non-finite, out of range, wrong
/// shape); `Numerical` covers failures of the numerics themselves and
/// carries the diagnostics available at the failure site (matrix size,
/// offending eigenvalue, residual, ...) in its message.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument or configuration value violates a documented precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A numerical procedure failed (factorization, root bracketing, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Reading or writing an artifact failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// (De)serializing an artifact failed.
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Shorthand for a `Parameter` error.
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// Shorthand for a `Numerical` error.
    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
