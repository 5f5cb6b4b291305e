use thiserror::Error;

/// Errors raised by the operator, subspace and lattice layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density operator (trace {trace}, minimum eigenvalue {min_eigenvalue:e})")]
    NotDensity { trace: f64, min_eigenvalue: f64 },

    #[error("not an orthogonal projector (deviation {deviation:e})")]
    NotProjector { deviation: f64 },

    #[error("shape {shape:?} does not match operator dimension {dim}")]
    ShapeMismatch { shape: Vec<usize>, dim: usize },

    #[error("subsystem index {index} out of range for {factors} factors")]
    SubsystemOutOfRange { index: usize, factors: usize },

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("feasibility undecided: best minimum eigenvalue {best_lambda_min:e} lies in the ambiguous band")]
    Undecided { best_lambda_min: f64 },

    #[error("facial reduction did not converge in round {round} (best minimum eigenvalue {best:e})")]
    NonConvergence { round: usize, best: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("oracle inconclusive: {0}")]
    OracleInconclusive(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unsupported dimensions: {0}")]
    UnsupportedDims(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
