use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid partition {0:?}: parts must be weakly decreasing")]
    InvalidPartition(Vec<usize>),

    #[error("invalid probability vector: {0}")]
    InvalidProbVec(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid Dyck path: {0}")]
    InvalidDyckPath(String),

    #[error("shape mismatch between insertion and recording tableau")]
    ShapeMismatch,

    #[error("{0} is empty")]
    Empty(&'static str),

    #[error("{what} = {value} exceeds the supported limit {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("x has (nearly) repeated entries; use the tableau-sum evaluator instead")]
    RepeatedEntries,

    #[error("first vector does not majorize the second")]
    NotMajorized,

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (value {0:e})")]
    NotPsd(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("input is outside the domain of the map: {0}")]
    NotInDomain(String),

    #[error(
        "rejection sampler gave up after {tries} tries (observed acceptance {observed:e}, expected {expected:e})"
    )]
    RejectionExhausted {
        tries: u64,
        observed: f64,
        expected: f64,
    },

    #[error("all importance weights are zero")]
    ZeroWeights,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
