use thiserror::Error;

use crate::network::Topology;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent {exponent} is outside 0..={q}")]
    InvalidExponent { exponent: i64, q: usize },

    #[error("bit-width {0} exceeds the supported maximum of 64")]
    BitWidthTooLarge(usize),

    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("{topology} profile requires {link} = 0, got {value}")]
    TopologyViolation {
        topology: Topology,
        link: &'static str,
        value: usize,
    },

    #[error("operation requires a {expected} profile, got {actual}")]
    WrongTopology {
        expected: Topology,
        actual: Topology,
    },

    #[error("capacity region of the {0} topology is not characterized")]
    UnsupportedTopology(Topology),

    #[error("power gain must be a finite non-negative number, got {0}")]
    NegativeGain(f64),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("rate pair ({r1}, {r2}) is outside [0, {q}]^2")]
    RateOutOfRange { r1: usize, r2: usize, q: usize },

    #[error("rate pair ({r1}, {r2}) is outside the capacity region")]
    InfeasibleRate { r1: usize, r2: usize },

    #[error("profile is not in the {technique} regime: {reason}")]
    RegimeMismatch {
        technique: &'static str,
        reason: String,
    },

    #[error("exhaustive search space of {size} candidates exceeds the ceiling of {ceiling}")]
    BudgetExceeded { size: u128, ceiling: u128 },

    #[error("no scheme found for ({r1}, {r2})")]
    SearchFailed { r1: usize, r2: usize },

    #[error("invalid json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
