use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} outside the supported range {min}..={max}")]
    DimensionOutOfRange { dim: usize, min: usize, max: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty distribution")]
    EmptyDistribution,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64 },

    #[error("columns are not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("{weights} weights supplied for {components} components")]
    WeightCountMismatch { weights: usize, components: usize },

    #[error("components {first} and {second} overlap")]
    Overlap { first: usize, second: usize },

    #[error("components must have equal volume ({first} vs {second})")]
    UnequalVolumes { first: f64, second: f64 },

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("invalid permutation of length {0}")]
    InvalidPermutation(usize),

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: String },

    #[error("at least {min} samples required, got {got}")]
    TooFewSamples { min: usize, got: usize },
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
