use thiserror::Error;

/// Errors raised by the constructors and operations of this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated the precondition of the operation it was passed to.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid mismatch: {left} nodes vs {right} nodes")]
    GridMismatch { left: usize, right: usize },

    /// A sampled function was asked for a value between grid nodes.
    #[error("point {re:+.6e}{im:+.6e}i is not a grid node")]
    OffGrid { re: f64, im: f64 },

    #[error("function is not unimodular (max deviation {deviation:.3e})")]
    NotUnimodular { deviation: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
