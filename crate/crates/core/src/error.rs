use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit: {what} exceeds the cap of {cap}")]
    ResourceLimit { what: String, cap: u64 },

    #[error("indistinguishable maxima for n={n}, m={m}: {detail}")]
    IndistinguishableMaxima { n: u64, m: u32, detail: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
