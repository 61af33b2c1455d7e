use thiserror::Error;

/// Errors raised by the computations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A coefficient past the stored truncation was requested.
    #[error("coefficient index {index} is beyond truncation {truncation}")]
    IndexBeyondTruncation { index: usize, truncation: usize },

    /// The available expansion is too short to make a linear solve unique.
    #[error("insufficient truncation: have {available}, need at least {required}")]
    InsufficientTruncation { available: usize, required: usize },

    /// Malformed user input (bad fraction, bad vector, out-of-range weight, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
