use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("tree decomposition width {width} exceeds cap {cap}")]
    WidthCapExceeded { width: usize, cap: usize },

    #[error("stage kind `{0}` has no colored exact solver")]
    UnsupportedKind(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
