use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A size limit of the bit-set representation or of an enumeration was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An input outside the domain of the operation (missing moments,
    /// asymmetric matrices, non-finite floats, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters violating the preconditions of a construction.
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("arithmetic mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
