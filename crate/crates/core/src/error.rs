use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not in SL(2,R): det = {0}")]
    NotUnimodular(f64),
    #[error("window mismatch: {0}")]
    WindowMismatch(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("K-type {n} cannot be resolved by a {points}-point circle rule")]
    Aliasing { n: i64, points: usize },
    #[error("pole of the eigenvalue ratio at u = {0}")]
    RatioPole(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("missing sample at dual point {0}")]
    MissingSample(String),
    #[error("malformed sequence descriptor: {0}")]
    MalformedDescriptor(String),
    #[error("descriptor has no limit: {0}")]
    NoLimit(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
