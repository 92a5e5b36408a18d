use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not invertible over Z")]
    NotUnimodular,
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("invalid block shape: {0}")]
    InvalidShape(String),
    #[error("nonzero entry in block ({row_block}, {col_block}) outside the poset order")]
    PatternViolation { row_block: usize, col_block: usize },
    #[error("matrix is not a unit of the requested blocked group")]
    NotAUnit,
    #[error("stabilization gate violated at poset element {0}: exactly one side has size 1")]
    StabilizationGate(usize),
    #[error("invalid shift-of-finite-type matrix: {0}")]
    InvalidSft(String),
    #[error("matrix is reducible")]
    Reducible,
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("invalid path-ring module: {0}")]
    InvalidModule(String),
    #[error("finite group of order {0} exceeds the enumeration cap of 64")]
    GroupTooLarge(BigInt),
    #[error("(U, V) is not a stabilizer pair of A")]
    NotStabilizer,
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
    #[error("invalid search budget: {0}")]
    InvalidBudget(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
