use crate::algebra::VarId;

/// Errors raised by the library. The CLI maps each variant onto an exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("no predicted spectrum registered for {kind} at n = {n}")]
    Registry { kind: String, n: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("assignment does not cover variable {0}")]
    MissingVariable(VarId),

    #[error("certification setup failed: {0}")]
    CertificationSetup(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
