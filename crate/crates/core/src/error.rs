use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground mismatch: {left} vs {right} elements")]
    GroundMismatch { left: usize, right: usize },
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("duplicate element name {0:?}")]
    DuplicateElement(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("reorientation is not defined on {0:?}")]
    NotTotal(String),
    #[error("sets to delete and contract overlap at {0:?}")]
    Overlap(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
