use thiserror::Error;

/// Errors produced by the simulation and estimation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty sample: {0}")]
    EmptySample(String),

    /// Cohen's kappa is undefined when chance agreement is 1 (both raters constant on the same label).
    #[error("kappa undefined: chance agreement is 1")]
    UndefinedKappa,

    #[error("config error at line {line}, key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
