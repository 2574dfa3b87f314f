use thiserror::Error;

/// Errors produced by state construction, linear algebra, and time evolution.
#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "matrix is not Hermitian: |M[{row}][{col}] - conj(M[{col}][{row}])| = {deviation:.3e} \
         exceeds tolerance {tolerance:.3e}"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("state vector is not normalized: |psi| = {norm} (expected 1 within {tolerance:.1e})")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("density matrix trace is {trace} (expected 1 within {tolerance:.1e})")]
    TraceNotOne { trace: f64, tolerance: f64 },

    #[error("non-physical state: eigenvalue {value:.3e} below -{floor:.1e}")]
    NegativeEigenvalue { value: f64, floor: f64 },

    #[error("duplicate basis label at rows {first} and {second}")]
    DuplicateLabel { first: usize, second: usize },

    #[error("partial trace keep-set must be a non-empty proper subset of the state's subsystems")]
    InvalidKeepSet,

    #[error("subsystem {0} is not part of this state")]
    UnknownSubsystem(String),

    #[error("subsystem sets do not match: {0}")]
    LabelMismatch(String),

    #[error("invalid subsystem subset: {0}")]
    InvalidSubsets(String),

    #[error("dimension mismatch: {expected} vs {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite amplitude encountered at s = {s}")]
    NonFiniteAmplitude { s: f64 },

    #[error(
        "norm drift {drift:.3e} at s = {s} exceeds {limit:.1e}; reduce the step size \
         (increase `steps`)"
    )]
    NormDrift { s: f64, drift: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
