use thiserror::Error;

/// Failure modes shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular system: zero pivot at row {row}")]
    SingularSystem { row: usize },
    #[error("no sign change found after {doublings} bracket doublings from {guess}")]
    NoBracket { guess: f64, doublings: u32 },
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("point {x} outside domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("field values are not strictly increasing (node {node})")]
    NotMonotone { node: usize },
    #[error("target {target} outside value range [{lo}, {hi}]")]
    OutOfRange { target: f64, lo: f64, hi: f64 },
    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),
    #[error("invalid stretch p = {0} (must be positive)")]
    InvalidStretch(f64),
    #[error("growth collapse: G = {value} at node {node}")]
    GrowthCollapse { node: usize, value: f64 },
    #[error("inconsistent geometry: {0}")]
    InconsistentGeometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
