use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: shapes, file contents, parameter ranges.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A computation would exceed its configured work or memory cap.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A hypothesis or a post-condition check failed.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
