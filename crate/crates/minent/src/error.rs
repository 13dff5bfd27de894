use thiserror::Error;

/// Errors for channel construction and the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max |M - M†| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is {0} but must be 1")]
    TraceNotOne(f64),

    #[error("vector norm is {0} but must be 1")]
    NotNormalized(f64),

    #[error("A-marginal is rank deficient (min eigenvalue {0:e}); channel reconstruction undefined")]
    RankDeficientMarginal(f64),

    #[error("subspace dimension {d_e} out of range 1..={max}")]
    SubspaceDimOutOfRange { d_e: usize, max: usize },

    #[error("bipartite shape {0}x{1} invalid: both factors must be at least 2")]
    InvalidShape(usize, usize),

    #[error("total dimension {0} is odd; the orthogonal-pair construction needs an even split")]
    OddTotalDimension(usize),

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("Rényi order must be nonnegative, got {0}")]
    InvalidRenyiOrder(f64),

    #[error("scan grid is empty or outside [0, 1)")]
    InvalidGrid,

    #[error("restart count must be at least 1")]
    NoRestarts,

    #[error("eigensolver failed to converge after {0} sweeps")]
    EigNonConvergence(usize),

    #[error("SDP solver stopped after {iterations} Newton steps with duality gap {gap:e}")]
    SdpNonConvergence { iterations: usize, gap: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
