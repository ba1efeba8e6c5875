use thiserror::Error;

/// Errors raised by the sorting, metric and experiment routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty objective block")]
    EmptyObjectiveBlock,

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("cannot parse relation `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("weights must be positive and finite")]
    InvalidWeight,

    #[error("no non-dominated element remains")]
    NoNonDominated,

    #[error("subset is not a selection")]
    NotSelection,

    #[error("{n} items exceed the exhaustive enumeration limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("duplicate rows are not allowed")]
    DuplicateRows,

    #[error("negative coordinate {value} with origin reference")]
    NegativeCoordinate { value: f64 },

    #[error("problem evaluation failed: {0}")]
    Evaluation(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
