use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry count {actual} does not match {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, actual: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("invalid trace {0}")]
    InvalidTrace(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("not unitary (max defect {0:e})")]
    NotUnitary(f64),

    #[error("invalid subsystem layout: {0}")]
    InvalidSubsystems(String),

    #[error("Kraus operators are not complete (max defect {0:e})")]
    IncompleteKraus(f64),

    #[error("invalid Hamiltonian spectrum: {0}")]
    InvalidHamiltonian(String),

    #[error("{name} out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("threshold {epsilon:e} not reached within {collisions} collisions")]
    ThresholdNotReached { epsilon: f64, collisions: usize },

    #[error("state of {requested} amplitudes exceeds the budget of {limit}")]
    MemoryBudget { requested: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
