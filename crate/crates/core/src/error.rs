use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode count must be at least 1")]
    NoModes,
    #[error("mode index {mode} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("mode {0} listed more than once")]
    DuplicateMode(usize),
    #[error("quadrature needs at least one mode")]
    EmptyModeSet,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("covariance matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("expected a {expected}-mode state, got {actual}")]
    WrongModeCount { expected: usize, actual: usize },
    #[error("state has nonzero quadrature mean (max |mean| = {0:e})")]
    NonZeroMean(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("variance must be positive, got {0}")]
    NonPositiveVariance(f64),
    #[error("transmissivity must lie in [0, 1], got {0}")]
    InvalidTransmissivity(f64),
    #[error("propagation distance must be non-negative, got {0}")]
    NegativeDistance(f64),
    #[error("marginal covariance is singular (det = {0:e})")]
    SingularMarginal(f64),
    #[error("eigen-decomposition did not converge")]
    EigenFailure,
    #[error("Fock cutoff {cutoff} too small for squeezing r = {r}")]
    CutoffTooSmall { cutoff: usize, r: f64 },
    #[error("Fock truncation lost {lost:e} of the norm (budget {budget:e})")]
    TruncationLoss { lost: f64, budget: f64 },
    #[error("norm drifted by {0:e} under passive evolution")]
    NormDrift(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
