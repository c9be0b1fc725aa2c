use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix has rank 0, no column basis exists")]
    NoBasis,

    #[error("invalid direction ({0}, {1})")]
    InvalidDirection(i64, i64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("enumeration of {count} minors exceeds the limit of {limit}")]
    LimitExceeded { count: String, limit: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("generic fan did not stabilize: {0}")]
    Stability(String),

    #[error("sampling gave up after {0} attempts")]
    ResampleCap(usize),

    #[error("internal consistency error: {0}")]
    Internal(String),
}
