use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient mismatch: {left} variables vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("letter {letter} out of range 1..={n}")]
    InvalidLetter { letter: usize, n: usize },

    #[error("polynomial is not homogeneous of length {0}")]
    NotHomogeneous(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("ambient dimension {n}^{len} exceeds budget {cap}")]
    BudgetExceeded { n: usize, len: usize, cap: u64 },

    #[error("prime {0} is not in the supported prime pool")]
    UnsupportedPrime(u32),

    #[error("pivot coefficient is not invertible in the configured field")]
    NotInvertible,

    #[error("fields disagree at {cell}: {left} vs {right}")]
    FieldDisagreement { cell: String, left: String, right: String },

    #[error("partition has {len} parts but gl_{n} allows at most {n}")]
    PartitionTooLong { len: usize, n: usize },

    #[error("not a partition: {0:?}")]
    InvalidPartition(Vec<u32>),

    #[error("weights are not symmetric under permuting variables (at {0:?})")]
    NonSymmetric(Vec<u32>),

    #[error("character is not Schur-positive: weight {weight:?} has multiplicity {multiplicity}")]
    NotSchurPositive { weight: Vec<u32>, multiplicity: i64 },

    #[error("star commutator is only defined here for even forms")]
    OddForm,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("corrupt cache file {path}: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
