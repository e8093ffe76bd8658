use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input text (distribution strings, matrix files, numbers).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("degree {0} is odd; this evaluation path requires an even degree")]
    OddDegree(usize),

    #[error("degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },

    #[error("moment of order {order} does not exist for pareto with alpha = {alpha}")]
    MomentExistence { order: usize, alpha: String },

    #[error("{0} has no moment generating function")]
    NoMgf(&'static str),

    #[error("matrix is not Hermitian (max |Z - Z*| = {0:e})")]
    NotHermitian(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate distribution: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl Error {
    /// True for errors caused by malformed input rather than a violated
    /// mathematical precondition.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}
