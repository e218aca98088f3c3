use thiserror::Error;

/// Errors raised by the accounting library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `P` puts mass where `Q` has none, so the divergence is infinite.
    #[error("not absolutely continuous: P has mass {mass} at index {index} where Q has none")]
    NotAbsolutelyContinuous { index: i64, mass: f64 },

    /// The brute-force oracle cannot handle the requested instance.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numerical routine failed to reach its target.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Malformed user input (CLI flags, ledger files).
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// Rejects anything that is not a finite, strictly positive real.
pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "{name} must be finite and > 0, got {value}"
        )))
    }
}
