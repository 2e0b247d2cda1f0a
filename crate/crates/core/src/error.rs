use thiserror::Error;

/// Errors produced by the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shooting amplitude must be positive, got {0}")]
    InvalidAmplitude(f64),

    #[error("ODE state left the magnitude bound at r = {radius:e}")]
    NonFiniteBlowup { radius: f64 },

    #[error("step size underflow at r = {radius:e}")]
    StepSizeUnderflow { radius: f64 },

    #[error("no amplitude bracket found for alpha = {alpha} in [{beta_min:e}, {beta_max:e}]")]
    NoSolutionFound {
        alpha: f64,
        beta_min: f64,
        beta_max: f64,
    },

    #[error("alpha = {alpha} is not a root of f = 1 (|f - 1| = {deviation:e})")]
    NotARoot { alpha: f64, deviation: f64 },

    #[error("Nehari projection undefined: {0}")]
    ProjectionUndefined(String),

    #[error("minimization did not converge within {iterations} iterations (last level {:e})", last.m_alpha)]
    NotConverged {
        iterations: usize,
        last: Box<crate::variational::EnergyReport>,
    },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("endpoint sequence did not converge: {0}")]
    ConvergenceNotReached(String),

    #[error("truncation radius too small: tail error {estimate:e} exceeds {tolerance:e}")]
    TruncationTooSmall { estimate: f64, tolerance: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
