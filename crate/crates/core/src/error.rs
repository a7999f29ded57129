use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("component mismatch: {0}")]
    ComponentMismatch(String),

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("invalid exponent {0}: must be >= 1")]
    InvalidExponent(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("support violation: {0}")]
    SupportViolation(String),

    #[error("Hoelder relation violated: {0}")]
    ExponentRelation(String),

    #[error("initial velocity is not divergence free (relative divergence {0:e})")]
    NotDivergenceFree(f64),

    #[error("malformed field file: header field `{field}`: {message}")]
    FieldFormat { field: &'static str, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
