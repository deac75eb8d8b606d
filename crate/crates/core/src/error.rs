use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the simulator and optimizers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown key `{0}`")]
    UnknownKey(String),

    #[error("bad value for `{key}`: {message}")]
    BadValue { key: String, message: String },

    #[error("distance must be positive, got {0} m")]
    NonPositiveDistance(f64),

    #[error("pair {pair} is not a member of SC pair {unit}")]
    NotAMember { pair: usize, unit: usize },

    #[error("zero CRNN for pair {pair} with decay factor {lambda}")]
    SingularWeight { pair: usize, lambda: f64 },

    #[error("infeasible capacity: {0}")]
    InfeasibleCapacity(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("minimum secrecy rate infeasible: pair {pair} peaks at {best_rate:.3} bit/s < {rate_min:.3} bit/s")]
    RateInfeasible {
        pair: usize,
        best_rate: f64,
        rate_min: f64,
    },

    #[error("unknown scenario `{name}` (built-in: {available})")]
    UnknownScenario { name: String, available: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
