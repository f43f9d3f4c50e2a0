use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("entry {index} is {value}, expected {expected}")]
    NotBinary {
        index: usize,
        value: f64,
        expected: &'static str,
    },

    #[error("constraint set is degenerate: {0}")]
    DegenerateConstraints(String),

    #[error(
        "log-det weight undefined: eigenvalue {eigenvalue} + epsilon {epsilon} is not positive"
    )]
    NonPsdIterate { eigenvalue: f64, epsilon: f64 },

    #[error("brute force supports n <= {max}, got n = {n}")]
    OracleTooLarge { n: usize, max: usize },

    #[error("SDP solver failed ({status}) after {iterations} iterations")]
    Solver {
        status: &'static str,
        iterations: usize,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
