use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("unsupported size: {n} qubits exceeds the limit of {limit}")]
    UnsupportedSize { n: usize, limit: usize },

    #[error("readout channel is not invertible (mean flip probability {eta_bar} >= 0.5)")]
    NonInvertibleChannel { eta_bar: f64 },

    #[error("degenerate normalization on qubit {qubit}: |m(0) - m_final| = {gap:e}")]
    DegenerateNormalization { qubit: usize, gap: f64 },

    #[error("series length {0} is odd; no bin sits exactly at half the drive frequency")]
    OddSeriesLength(usize),

    #[error("variance undefined: {0} retained qubits (need at least 2)")]
    UndefinedVariance(usize),

    #[error("underdetermined tomography: {0}")]
    Underdetermined(String),

    #[error("matrix logarithm branch failure: {0}")]
    BranchFailure(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
