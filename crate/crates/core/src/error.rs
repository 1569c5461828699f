use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("matrix must have dimension >= 1")]
    EmptyMatrix,

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("density matrix trace {trace} is not 1")]
    NotUnitTrace { trace: f64 },

    #[error("eigen-decomposition did not converge after {sweeps} sweeps")]
    NumericalFailure { sweeps: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("expected {expected} parameters, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("invalid ansatz: {0}")]
    InvalidAnsatz(String),

    #[error("theta grid would have {points} points (cap {cap})")]
    GridTooLarge { points: u128, cap: usize },

    #[error("grid resolution must be >= 2, got {0}")]
    GridResolution(usize),

    #[error("degenerate task spec: {0}")]
    DegenerateSpec(String),

    #[error("invalid task: {0}")]
    InvalidTask(String),

    #[error("class label must be 0 or 1, got {0}")]
    InvalidClass(usize),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("tasks do not share a common feature support")]
    UnalignedSupport,

    #[error("ansatz uses repeated data encoding; one-time encoding required")]
    NotOneTimeEncoding,

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
