use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("numerical failure at t = {t}: {what}")]
    NumericalFailure { t: f64, what: String },

    #[error("trajectory too short: {periods} complete drive periods retained, need at least {needed}")]
    TooShortTrajectory { periods: usize, needed: usize },

    #[error("argument {x} outside the supported domain |x| < {limit}")]
    Domain { x: f64, limit: f64 },

    #[error("malformed sweep row: {0}")]
    MalformedRow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
