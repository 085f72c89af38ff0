use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum QspecError {
    /// Operands built for different variable sets or truncation orders.
    #[error("configuration error: {0}")]
    Config(String),
    /// Input outside the domain of an operation (zero substitution, empty polynomial, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A query needs data beyond the configured degree cap.
    #[error("capacity error: {0} (raise the degree cap)")]
    Capacity(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cache invalid: {0}")]
    CacheInvalid(String),
    #[error("cache corrupt at line {line}: {msg}")]
    CacheCorrupt { line: usize, msg: String },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QspecError>;
