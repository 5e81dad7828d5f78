use std::fmt;

use thiserror::Error;

/// A named defect found while validating an explicit distance matrix.
///
/// Indices refer to rows of the matrix (agents first, then candidates).
#[derive(Debug, Clone, PartialEq)]
pub enum MetricViolation {
    Shape { rows: usize, expected: usize },
    NonFinite { a: usize, b: usize },
    Negative { a: usize, b: usize },
    NonzeroDiagonal { a: usize },
    Asymmetry { a: usize, b: usize },
    Triangle { a: usize, b: usize, c: usize },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shape { rows, expected } => {
                write!(
                    f,
                    "matrix has {rows} entries in some row/column, expected {expected}"
                )
            }
            Self::NonFinite { a, b } => write!(f, "d({a},{b}) is not finite"),
            Self::Negative { a, b } => write!(f, "d({a},{b}) is negative"),
            Self::NonzeroDiagonal { a } => write!(f, "d({a},{a}) is not zero"),
            Self::Asymmetry { a, b } => write!(f, "d({a},{b}) != d({b},{a})"),
            Self::Triangle { a, b, c } => write!(f, "d({a},{c}) > d({a},{b}) + d({b},{c})"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid metric: {0}")]
    Metric(MetricViolation),
    #[error("{what} is {actual}, above the exhaustive-search limit of {limit}")]
    Size {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("level {level} exceeds k = {k}: no default coalition reaches the quota")]
    InfeasibleLevel { level: usize, k: usize },
    #[error("operation requires a euclidean instance")]
    UnsupportedBackend,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal invariant broken: {0}")]
    Invariant(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
