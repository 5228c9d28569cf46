use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpkitError {
    #[error("mode {mode} out of range, basis has {available} Fock modes")]
    ModeOutOfRange { mode: usize, available: usize },
    #[error("factor {factor} out of range, basis has {available} factors")]
    FactorOutOfRange { factor: usize, available: usize },
    #[error("factor {0} is not a spin factor")]
    NotSpinFactor(usize),
    #[error("fock factor must hold at least one mode")]
    EmptyFockFactor,
    #[error("modes {first} and {second} have unequal cutoffs ({first_cutoff} vs {second_cutoff})")]
    UnequalCutoffs {
        first: usize,
        second: usize,
        first_cutoff: usize,
        second_cutoff: usize,
    },
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not hermitian, max asymmetry {0:e}")]
    NotHermitian(f64),
    #[error("state vector has norm {0}, expected 1")]
    Unnormalized(f64),
    #[error("eigensolver did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, OpkitError>;
