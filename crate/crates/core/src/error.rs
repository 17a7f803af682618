use thiserror::Error;

/// Errors raised across the library.
///
/// Each variant maps onto one of the stable CLI exit codes via [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("route error: {0}")]
    Route(String),

    #[error("series or quadrature did not converge: {0}")]
    Convergence(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Adding exact values that carry different powers of π.
    #[error("incompatible exact values: {0}")]
    Algebra(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 64,
            Error::Domain(_) | Error::Route(_) | Error::Range(_) | Error::Unsupported(_) => 65,
            Error::Algebra(_) | Error::Convergence(_) => 70,
            Error::Io(_) => 74,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
