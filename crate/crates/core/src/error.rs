use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
///
/// Protocol-level failures that a protocol can *report* (a decode
/// failure, a hash collision detected by Bob) are not errors; they surface as
/// `ProtocolOutcome::reported_failure`. This enum is for contract violations
/// and for runs that could not be carried out at all.
#[derive(Debug, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("capability exceeded: {0}")]
    Capability(String),

    #[error("internal invariant broken: {0}")]
    Invariant(String),

    #[error("probabilistic construction failed: {0}")]
    ProbabilisticFailure(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("protocol deadlock: {0}")]
    Deadlock(String),

    #[error("{party} failed: {source}")]
    Party {
        party: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("transport error: {0}")]
    Transport(#[from] std::io::Error),

    #[error("malformed message: {0}")]
    Malformed(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report encoding failed: {0}")]
    Report(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
