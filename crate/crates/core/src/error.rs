use thiserror::Error;

use crate::game::Move;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request is well-formed but exceeds a configured size bound.
    #[error("capacity exceeded: {what} is {value}, limit is {limit}")]
    Capacity {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("illegal move {mv}: {reason}")]
    IllegalMove { mv: Move, reason: String },
    #[error("no move available from a terminal position")]
    NoMove,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(what: &'static str, value: u64, limit: u64) -> Self {
        Error::Capacity { what, value, limit }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
