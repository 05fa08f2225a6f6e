use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} lies outside the window [0, {window}]")]
    OutOfWindow { element: usize, window: usize },

    #[error("window lengths differ: [0, {left}] vs [0, {right}]")]
    WindowMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid game parameters: {0}")]
    InvalidParams(String),

    #[error("{what} refused: {reason}")]
    Refused { what: &'static str, reason: String },

    #[error("player I produced an invalid cylinder in round {round}: {reason}")]
    Protocol { round: usize, reason: String },

    #[error("comparison too close to decide: {0}")]
    ComparisonTooClose(String),

    #[error("no geometric constant c in (1/2, 1) works from n0 = {n0}; smallest workable n0 is {suggestion:?}")]
    NoGeometricConstant { n0: u64, suggestion: Option<u64> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
