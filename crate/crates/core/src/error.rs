use thiserror::Error;

/// Errors produced by the protocol core.
///
/// Verification failures collapse into [`Error::AuthenticationFailed`]; the
/// caller cannot tell a wrong master secret from a tampered transcript.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("payload of {0} bytes does not fit a 32-bit length prefix")]
    Oversize(usize),
    #[error("invalid identity: {0}")]
    InvalidIdentity(&'static str),
    #[error("master secret must not be empty")]
    EmptySecret,
    #[error("derived secret is unusable; choose a different master secret")]
    InvalidSecret,
    #[error("invalid group parameters: {0}")]
    InvalidGroup(&'static str),
    #[error("protocol violation: {0}")]
    ProtocolViolation(&'static str),
    #[error("authentication failed")]
    AuthenticationFailed,
    #[error("requested session duration {requested}s exceeds the {max}s cap")]
    DurationRejected { requested: u64, max: u64 },
    #[error("session expired")]
    SessionExpired,
    #[error("could not sample a usable ephemeral key")]
    EphemeralExhausted,
    #[error("malformed payload: {0}")]
    Payload(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
