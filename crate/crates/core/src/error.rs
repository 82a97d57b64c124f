use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    Empty,
    #[error("zero vector is not an element of FIN_k")]
    ZeroVector,
    #[error("entry {value} at coordinate {index} is negative")]
    NegativeEntry { index: usize, value: i64 },
    #[error("entry {value} at coordinate {index} exceeds bound {bound}")]
    EntryOutOfRange { index: usize, value: i64, bound: u8 },
    #[error("bound {0} outside the supported range 1..=9")]
    BoundOutOfRange(i64),
    #[error("sum undefined: supports are not strictly ordered")]
    Undefined,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid tetris map: {0}")]
    InvalidMap(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid block sequence: {0}")]
    InvalidBlockSequence(String),
    #[error("budget exceeded: {what} needs {size}, limit is {limit}")]
    BudgetExceeded { what: &'static str, size: u128, limit: u128 },
    #[error("coloring has no color for {0}")]
    MissingColor(String),
    #[error("malformed model: {0}")]
    MalformedModel(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
