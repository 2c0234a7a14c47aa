use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("not acyclic")]
    NotAcyclic,

    #[error("invalid probability {value} on edge {edge}")]
    InvalidProbability { edge: usize, value: f64 },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    /// No s-t path survives preprocessing. Callers report a reliability of
    /// exactly zero rather than treating this as a failure.
    #[error("zero reliability: no s-t path exists")]
    ZeroReliability,

    #[error("path count overflow")]
    PathCountOverflow,

    #[error("no path: state does not contain an s-t path")]
    NoPath,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sample stream exhausted after {0} samples")]
    StreamExhausted(u64),

    #[error("instance exceeds the {what} cap ({actual} > {cap})")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        cap: usize,
    },
}

impl Error {
    pub fn is_zero_reliability(&self) -> bool {
        matches!(self, Error::ZeroReliability)
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
