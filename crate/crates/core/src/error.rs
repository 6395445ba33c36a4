use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed number spec `{0}`")]
    MalformedSpec(String),
    #[error("liouville exponent growth must exceed 1 (got {0})")]
    LiouvilleGrowth(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("zero vector has no split norm")]
    ZeroVector,
    #[error("vector is vertical (p1 = 0)")]
    Vertical,
    #[error("vector is horizontal (p2 = 0)")]
    Horizontal,
    #[error("shape mismatch: expected ({0},{1}), got ({2},{3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("basis is rank deficient")]
    RankDeficient,
    #[error("discrete set has a vertical vector: the orbit diverges")]
    VerticalVector,
    #[error("offset produces an exact integer solution")]
    ExactSolution,
    #[error("empty estimation window: {0}")]
    EmptyWindow(String),
    #[error("empty discrete set within the search budget")]
    EmptySet,
    #[error("trajectory never reaches depth {0}")]
    Shallow(f64),
    #[error("point is cuspidal")]
    Cuspidal,
    #[error("no admissible parameter within budget: {0}")]
    NoAdmissible(String),
    #[error("disconnected surface")]
    Disconnected,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
