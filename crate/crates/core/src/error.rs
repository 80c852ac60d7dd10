use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group specification: {0}")]
    InvalidSpec(String),

    #[error("group element does not belong to this group: {0}")]
    SpecMismatch(String),

    #[error("group of order {order} exceeds the enumeration limit {limit}")]
    TooLarge { order: u128, limit: u128 },

    #[error("search space of {size} candidates exceeds the budget {budget}")]
    SearchSpaceTooLarge { size: u128, budget: u128 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cocycle is not normalized")]
    NotNormalized,

    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error("matrix is not antisymmetric (deviation {0:e})")]
    NotAntisymmetric(f64),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("map is not symplectic for this cocycle")]
    NotSymplectic,

    #[error("intertwiner construction failed: {0}")]
    Degenerate(String),

    #[error("inconsistent Clifford witness: {0}")]
    InconsistentWitness(String),

    #[error("operation requires {0}")]
    Unsupported(String),

    #[error("angle-number grid of {grid} points is too small for band {band} (need an even grid >= {needed})")]
    GridTooSmall { grid: usize, band: usize, needed: usize },

    #[error("coefficient vector is not normalized (norm^2 = {0})")]
    NotNormalizedState(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
