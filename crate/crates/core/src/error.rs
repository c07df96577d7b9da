use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate point: ids {first} and {second} share location ({x}, {y})")]
    DuplicatePoint {
        first: u32,
        second: u32,
        x: String,
        y: String,
    },
    #[error("point id {0} appears more than once")]
    DuplicateId(u32),
    #[error("grade {0} is not supported in exact mode (use approximate mode)")]
    ModeUnsupported(u32),
    #[error("coordinate {0} does not fit the exact construction kernel")]
    CoordinateRange(String),
    #[error("input point set is empty")]
    EmptyInput,
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
