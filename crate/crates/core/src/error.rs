use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("design cross-product matrix is rank deficient (pivot {pivot} at column {column})")]
    RankDeficient { column: usize, pivot: f64 },

    #[error("insufficient rows: have {rows}, need at least {needed}")]
    InsufficientRows { rows: usize, needed: usize },

    #[error("fraction b = {b} leaves n*b - k = {df} < 1 (n = {n}, k = {k})")]
    FractionTooSmall { b: f64, n: usize, k: usize, df: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("response is an exact linear function of the design (zero residual sum of squares)")]
    DegenerateFit,

    #[error("index set is empty")]
    EmptyIndexSet,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("duplicate index {0} in index set")]
    DuplicateIndex(usize),

    #[error("{p} predictors exceeds the enumeration limit of {max}")]
    TooManyPredictors { p: usize, max: usize },

    #[error("model set covers {got} models, expected all {expected}")]
    IncompleteModelSet { expected: usize, got: usize },

    #[error("covariance draw undefined: {rows} rows for {dim} jointly modelled variables")]
    DegenerateCovariance { rows: usize, dim: usize },

    #[error("column {0} has no observed values")]
    AllMissingColumn(String),

    #[error("parse error at data row {row}, column {column}: {message}")]
    Parse { row: usize, column: String, message: String },

    #[error("response missing at data row {0}")]
    MissingResponse(usize),

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("column {column} already has missing cells")]
    AlreadyMissing { column: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 input, 3 numerical, 4 IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::MissingResponse(_)
            | Error::UnknownColumn(_)
            | Error::AlreadyMissing { .. }
            | Error::InvalidArgument(_)
            | Error::DimensionMismatch { .. }
            | Error::EmptyIndexSet
            | Error::IndexOutOfRange { .. }
            | Error::DuplicateIndex(_)
            | Error::TooManyPredictors { .. }
            | Error::IncompleteModelSet { .. }
            | Error::AllMissingColumn(_)
            | Error::Json(_) => 2,
            Error::Csv(e) if !e.is_io_error() => 2,
            Error::RankDeficient { .. }
            | Error::InsufficientRows { .. }
            | Error::FractionTooSmall { .. }
            | Error::NotPositiveDefinite
            | Error::DegenerateFit
            | Error::DegenerateCovariance { .. } => 3,
            Error::Io(_) | Error::Csv(_) => 4,
        }
    }
}
