use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coupling {name} must be positive and finite, got {value}")]
    InvalidCoupling { name: &'static str, value: f64 },

    #[error("detuning must be finite, got {0}")]
    InvalidDetuning(f64),

    #[error("subspace index {0} is out of range for this operation")]
    InvalidSubspace(i64),

    #[error("time must be finite and non-negative, got {0}")]
    InvalidTime(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("photon cutoff {cutoff} is below the required minimum {min}")]
    CutoffTooSmall { cutoff: u32, min: u32 },

    #[error("pass would populate photon number {photons} above cutoff {cutoff}")]
    CutoffExceeded { photons: u32, cutoff: u32 },

    #[error("photon number {photons} is outside [0, {cutoff}]")]
    PhotonOutOfRange { photons: u32, cutoff: u32 },

    #[error("zero-probability outcome: {0}")]
    ZeroProbability(String),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("supersinglet size {0} outside supported range 2..=6")]
    SupersingletSize(usize),

    #[error("atom index {index} out of range for {num_atoms} atoms")]
    AtomIndex { index: usize, num_atoms: usize },

    #[error("grid axis {0} given both as a range and as a fixed value")]
    AxisConflict(&'static str),

    #[error("parameter {0} is neither gridded nor fixed")]
    MissingAxis(&'static str),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("parse error: {0}")]
    Parse(String),
}
