use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site} out of range for {n_qubits} qubits (sites are 1-based)")]
    SiteOutOfRange { site: usize, n_qubits: usize },

    #[error("{n_qubits} qubits exceeds the dense-storage limit of {max}")]
    TooManyQubits { n_qubits: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator is not Hermitian: {0}")]
    NonHermitian(String),

    #[error("state is not normalized: |psi| = {0}")]
    NotNormalized(f64),

    #[error("invalid `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("single-qubit mixing angle undefined at epsilon = delta = 0")]
    DegenerateQubit,

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("norm drift {drift:.3e} at t = {time:.6} exceeds 1e-6; reduce the time step (currently {step:.6e})")]
    NormDrift { drift: f64, time: f64, step: f64 },

    #[error("non-finite prediction at closed-loop step {0}")]
    NonFinitePrediction(usize),

    #[error("Mackey-Glass integration diverged at t = {0}")]
    Divergence(f64),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("least-squares design matrix is identically zero")]
    ZeroDesign,

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than a numerical failure.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::InvalidParameter { .. }
                | Error::SiteOutOfRange { .. }
                | Error::TooManyQubits { .. }
                | Error::Empty(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
