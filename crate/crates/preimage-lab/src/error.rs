use thiserror::Error;

/// Errors surfaced by the library's exact-arithmetic routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented precondition (zero divisor, wrong chart,
    /// non-integral element where an algebraic integer is required, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input is valid but outside the range this implementation can certify
    /// (e.g. a norm whose factorization cannot be completed under the
    /// configured trial-division bound).
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    /// A computation produced a value that contradicts the classification
    /// the caller asserted (e.g. a non-unit fourth-power-free part where a
    /// unit was expected). Always a genuine finding, never swallowed.
    #[error("classification violation: {0}")]
    ClassificationViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn unsupported<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::UnsupportedInput(msg.into()))
}
