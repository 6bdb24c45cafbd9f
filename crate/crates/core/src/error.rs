use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dimension {dim} not supported here (need at least {min})")]
    InvalidDimension { dim: usize, min: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<u32>),

    #[error(
        "estimated table footprint of {estimated} bytes exceeds the memory budget of {limit} bytes"
    )]
    MemoryBudget { estimated: u128, limit: u64 },

    #[error("brute-force enumeration refused: more than {limit} nodes")]
    EnumerationGuard { limit: u64 },

    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{function} argument {at} is outside the supported range")]
    OutOfRange { function: &'static str, at: String },

    #[error("Bernoulli number B_{0} requested, table holds B_0..=B_64")]
    BernoulliLimit(usize),

    #[error("1/2 + {t}i is not a zeta zero: |zeta| = {residual:e}")]
    NotAZetaZero { t: f64, residual: f64 },

    #[error("Newton refinement of the zeta zero near t = {t} did not converge")]
    ZeroRefinement { t: f64 },

    #[error("zeros file, line {line}: {message}")]
    ZerosFile { line: usize, message: String },

    #[error("no zeta zeros supplied")]
    NoZeros,

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
