use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("points must have at least one coordinate")]
    ZeroDimension,

    #[error("curve `{0}` has no vertices")]
    EmptyCurve(String),

    #[error("curve set is empty")]
    EmptyCurveSet,

    #[error("duplicate curve id `{0}`")]
    DuplicateId(String),

    #[error("unknown curve `{0}`")]
    UnknownCurve(String),

    #[error("curve `{curve}` has no vertex {index} (indices are 1-based)")]
    InvalidIndex { curve: String, index: usize },

    #[error("invalid character `{0}` (alphabet is {{A, B}})")]
    InvalidCharacter(char),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "ball around center vertex {vertex} contains no input vertex (center radius understated)"
    )]
    EmptyBall { vertex: usize },

    #[error("search budget of {limit} candidates exceeded; {advice}")]
    ResourceLimit { limit: u64, advice: &'static str },

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceLimit { .. } => 2,
            Error::Internal(_) => 3,
            _ => 1,
        }
    }
}
