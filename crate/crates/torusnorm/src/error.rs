use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid embedding: {0}")]
    Invalid(String),
    #[error("walk is not closed")]
    NotClosed,
    #[error("malformed walk: {0}")]
    MalformedWalk(String),
    #[error("{0}")]
    Precision(String),
    #[error("zero class has no representative cycle")]
    ZeroClass,
    #[error("pair is not good: {0}")]
    NotGood(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("invalid norm specification: {0}")]
    Spec(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("k must be at least 1")]
    EmptyRequest,
}

pub type Result<T> = std::result::Result<T, Error>;
