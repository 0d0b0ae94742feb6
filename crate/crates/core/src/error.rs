use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building states, subspaces or
/// measurement operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A^dagger| = {residual:e} exceeds {tol:e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error(
        "matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e} below -{tol:e}"
    )]
    NotPsd { min_eigenvalue: f64, tol: f64 },

    #[error("trace is {trace}, expected 1 (residual {residual:e})")]
    TraceNotOne { trace: f64, residual: f64 },

    #[error("ensemble weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },

    #[error("ensemble vector {index} has norm {norm}, expected 1")]
    NotUnitVector { index: usize, norm: f64 },

    #[error("rank {rank} is not in 1..={dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("candidate set needs at least 2 states, found {0}")]
    TooFewStates(usize),

    #[error("candidate states '{first}' and '{second}' are equal")]
    DuplicateState { first: String, second: String },

    #[error("state '{label}': {source}")]
    InvalidState {
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error("condition not met: {0}")]
    ConditionNotMet(String),

    #[error("tuple size {n} is shorter than the {reduced} reduced candidates")]
    TupleTooShort { n: usize, reduced: usize },

    #[error("tuple size must be at least 2, got {0}")]
    TupleSize(usize),

    #[error("d^n = {size} exceeds the configured cap {cap}")]
    CapExceeded { size: u128, cap: usize },

    #[error("witness index {index} out of range for {k} candidates")]
    BadIndex { index: usize, k: usize },
}
