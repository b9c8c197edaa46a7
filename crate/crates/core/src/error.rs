use thiserror::Error;

/// Errors raised by the linear-algebra, TPS and simulation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid subsystem dimensions: {0}")]
    InvalidDims(String),

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("invalid bipartition: {0}")]
    InvalidCut(String),

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("operator is not hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("zero operator has no Schmidt decomposition")]
    ZeroOperator,

    #[error("basis is not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("operators do not commute (commutator norm {0:e})")]
    NonCommuting(f64),

    #[error("basis vectors {0} and {1} share all eigenvalue labels")]
    DegenerateLabels(usize, usize),

    #[error(
        "vector {vector} is not an eigenvector of operator {operator} (residual {residual:e})"
    )]
    NotEigenvector {
        vector: usize,
        operator: usize,
        residual: f64,
    },

    #[error("group element incompatible with the momentum grid: {0}")]
    GridIncompatible(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension {actual} exceeds the dense cap {cap}")]
    DimensionCap { actual: usize, cap: usize },

    #[error("numerical guard tripped: {0}")]
    NumericalGuard(String),
}

pub type Result<T> = std::result::Result<T, Error>;
