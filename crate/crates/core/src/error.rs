use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A distribution spec could not be parsed.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// A parameter violates a family constraint.
    #[error("range error: {0}")]
    Range(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The integrand returned NaN or an infinity.
    #[error("non-finite integrand value at t = {at}")]
    NonFinite { at: f64 },

    /// Quadrature or truncation could not reach the requested tolerance.
    #[error("accuracy not reached: best estimate {best} with error estimate {error_estimate}")]
    Accuracy { best: f64, error_estimate: f64 },

    /// Two independent routes to the same quantity disagree.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
