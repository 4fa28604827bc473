//! Error type shared by every module.

use thiserror::Error;

/// Failures raised by the library. Each variant maps to one CLI exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller supplied arguments outside an operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Incidence data does not describe a closed cell complex.
    #[error("structural failure: {0}")]
    Structural(String),
    /// A size guard was exceeded before any work was done.
    #[error("resource guard exceeded: {0}")]
    Resource(String),
    /// A property that the construction guarantees did not hold.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    /// A requested gluing cannot be realized by a group element.
    #[error("construction error: {0}")]
    Construction(String),
    /// Input data is internally inconsistent.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// A surface-only operation was applied to an orbifold with reflector edges.
    #[error("orbifold is not a surface: {0}")]
    NotASurface(String),
    /// Points lie in different components of a graph.
    #[error("disconnected: {0}")]
    Disconnected(String),
    /// Reading or writing a file failed.
    #[error("i/o error: {0}")]
    Io(String),
    /// A polyhedron is well formed but violates a right-angled Coxeter condition.
    #[error("not right-angled: {0}")]
    NotRightAngled(String),
    /// A serialized document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "E_INVALID_INPUT",
            Error::Structural(_) => "E_STRUCTURAL",
            Error::Resource(_) => "E_RESOURCE",
            Error::InvariantViolation(_) => "E_INVARIANT",
            Error::Construction(_) => "E_CONSTRUCTION",
            Error::Malformed(_) => "E_MALFORMED",
            Error::NotASurface(_) => "E_NOT_SURFACE",
            Error::Disconnected(_) => "E_DISCONNECTED",
            Error::Io(_) => "E_IO",
            Error::Parse(_) => "E_PARSE",
            Error::NotRightAngled(_) => "E_NOT_RIGHT_ANGLED",
        }
    }

    /// Process exit status used by the CLI.
    pub fn exit_status(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 10,
            Error::Structural(_) => 11,
            Error::Resource(_) => 12,
            Error::InvariantViolation(_) => 13,
            Error::Construction(_) => 14,
            Error::Malformed(_) => 15,
            Error::NotASurface(_) => 16,
            Error::Disconnected(_) => 17,
            Error::Io(_) => 18,
            Error::Parse(_) => 19,
            Error::NotRightAngled(_) => 20,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
