use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain length must be positive, got {0}")]
    NonPositiveLength(f64),

    #[error("grid needs at least {min} cells, got {got}")]
    TooFewCells { got: usize, min: usize },

    #[error("expected {expected} interior samples, got {got}")]
    SampleLengthMismatch { expected: usize, got: usize },

    #[error("state contains a non-finite value at interior node {index}")]
    NonFiniteValue { index: usize },

    #[error("saturation levels must be positive, got u_min = {u_min}, u_max = {u_max}")]
    InvalidLevels { u_min: f64, u_max: f64 },

    #[error("feedback gain must be positive, got {0}")]
    InvalidGain(f64),

    #[error("dimension mismatch: operator acts on {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("singular matrix: zero pivot in column {column}")]
    SingularMatrix { column: usize },

    #[error("simulation diverged at t = {time}")]
    NonFiniteState { time: f64 },

    #[error("decay-fit window [{t_start}, {t_end}] holds fewer than two usable samples")]
    EmptyWindow { t_start: f64, t_end: f64 },

    #[error("energy at t = {time} in the fit window is not positive")]
    NonPositiveEnergyInWindow { time: f64 },

    #[error("energy trace is malformed: {0}")]
    InvalidTrace(String),

    #[error("maximum length {0} is below the smallest critical length 2*pi")]
    MaxLengthTooSmall(f64),

    #[error("dense eigensolve limited to dimension {max}, got {dim}")]
    TooLarge { dim: usize, max: usize },

    #[error("eigensolve failed: {0}")]
    EigensolveFailure(String),

    #[error(
        "fixed-point iteration did not converge in {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("bound coefficient alpha = {0} is not positive")]
    AlphaNotPositive(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
