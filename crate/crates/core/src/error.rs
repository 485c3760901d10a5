use thiserror::Error;

/// Errors surfaced by geometry construction, engine queries, and instance IO.
#[derive(Debug, Error)]
pub enum LlbmError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate body: {0}")]
    DegenerateBody(String),

    #[error("segment is not a structural summand: {0}")]
    NotASummand(String),

    #[error("oracle fit unreliable (condition number {cond:.3e} exceeds {limit:.1e})")]
    OracleUnreliable { cond: f64, limit: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("internal cross-check failed: {0}")]
    SelfCheck(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LlbmError>;
