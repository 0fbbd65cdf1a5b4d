use thiserror::Error;

/// Errors raised by the workbench. Verification failures are not errors:
/// they come back as data in the various verdict types.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller misuse: mixed-algebra operands, missing map entries, bad flags.
    #[error("usage error: {0}")]
    Usage(String),
    /// A construction parameter is out of range.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// A value is outside the domain of a partial operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Text could not be parsed. `pos` is a byte offset or a 1-based line number.
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// A configured resource budget would be exceeded.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    /// Evaluation hit a variable with no assigned value.
    #[error("unbound variable x{0}")]
    Unbound(u32),
    #[error("i/o error: {0}")]
    Io(String),
    /// An invariant the code relies on did not hold.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Parameter(_) | Error::Domain(_) | Error::Unbound(_) => 2,
            Error::Parse { .. } | Error::Io(_) => 3,
            Error::Resource(_) => 4,
            Error::Internal(_) => 5,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
