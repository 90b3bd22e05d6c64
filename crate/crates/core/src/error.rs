use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("invalid depth multiset: {0}")]
    InvalidMultiset(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("divisibility failure: {0}")]
    Divisibility(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("extension not Galois or not uniform: {0}")]
    NotGalois(String),

    #[error("inseparable polynomial")]
    Inseparable,

    #[error("invalid record: {0}")]
    Record(String),

    #[error("inconsistent sources: {0}")]
    Inconsistent(String),

    #[error("fetch failed: {0}")]
    Fetch(#[from] FetchError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FetchError {
    #[error("record `{0}` not found")]
    NotFound(String),

    #[error("network access disabled; `{0}` is not available offline")]
    Policy(String),

    #[error("transport error: {0}")]
    Transport(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
