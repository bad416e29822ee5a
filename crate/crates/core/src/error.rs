use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("all amplitudes are zero")]
    ZeroVector,
    #[error("unsupported amplitude vector length {0} (expected 4, 8, 16 or 32)")]
    BadLength(usize),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("ensemble members act on different numbers of qubits")]
    MixedDimensions,
    #[error("invalid subsystem selection: {0}")]
    BadSubset(String),
    #[error("local operator annihilates the state")]
    ZeroResult,
    #[error("wrong size: expected dimension {expected}, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("matrix does not have orthonormal columns (deviation {0:.3e})")]
    NotIsometry(f64),
    #[error("isometry has {columns} columns but the state has rank {rank}")]
    RankMismatch { columns: usize, rank: usize },
    #[error("at least two points are required")]
    TooFewPoints,
    #[error("Bloch vector does not describe a state (minimum eigenvalue {0:.3e})")]
    NotAState(f64),
    #[error("state has weight outside the GHZ+ subspace (leakage {0:.3e})")]
    OutsideSubspace(f64),
    #[error("invalid roof problem: {0}")]
    BadProblem(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::BadParameter(msg.into())
    }
}
