use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Arguments outside the operation's domain (shape, range, type mismatch).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative numerical method did not reach its tolerance.
    #[error("numeric error: {message} (after {iterations} iterations, last change {last_change:e})")]
    Numeric {
        message: String,
        iterations: usize,
        last_change: f64,
    },

    /// The requested size is beyond what the exact kernels are allowed to run.
    #[error("feasibility limit: {what} of size {size} exceeds the limit {limit}")]
    Feasibility {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    /// Malformed textual or file input.
    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(position: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            position: position.into(),
            message: message.into(),
        }
    }
}
