//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1, got {0}")]
    InvalidDimension(usize),

    #[error("axis {axis} out of range for dimension {d}")]
    AxisOutOfRange { axis: usize, d: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("walk length must be at least {min}, got {got}")]
    InvalidLength { min: usize, got: usize },

    #[error("pivot index {k} out of range for an {n}-step walk")]
    PivotOutOfRange { k: usize, n: usize },

    #[error("symmetry group enumeration is capped at dimension {max}, got {d}")]
    GroupTooLarge { d: usize, max: usize },

    #[error("state space exceeds the enumeration cap of {cap} walks")]
    CapacityExceeded { cap: usize },

    #[error("prefix length {m} exceeds walk length {n}")]
    PrefixTooLong { m: usize, n: usize },

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("partition ground sets differ: {left} vs {right}")]
    GroundSetMismatch { left: usize, right: usize },

    #[error("not a partition of 1..={ground}: {reason}")]
    InvalidPartition { ground: usize, reason: String },

    #[error("matrix is not block-stable: row block {row_block} and column block {col_block} have unequal row sums")]
    NotStable { row_block: usize, col_block: usize },

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
