use thiserror::Error;

/// Errors produced by the numerics and validation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("POVM has no elements")]
    EmptyPovm,

    #[error("rank {rank} is outside 1..={dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("vector is not unit norm (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("operator is not a rank-one projection")]
    NotRankOne,

    #[error("unsupported dimension {0}")]
    BadDim(usize),

    #[error("{0} is not an odd prime")]
    NotOddPrime(usize),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("projection {0} annihilates the vector")]
    NullProjection(usize),

    #[error("vector is annihilated by the operator square root")]
    NullVector,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid effect: {0}")]
    InvalidEffect(String),

    #[error("effects do not sum to the identity (Frobenius deviation {deviation:e})")]
    IncompletePovm { deviation: f64 },

    #[error("POVM is not projective: {0}")]
    NotPvm(String),

    #[error("operands do not match bound kind {0}")]
    OperandMismatch(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
