//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument fell outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Configuration file could not be parsed.
    #[error("config parse error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    /// A configuration value failed validation.
    #[error("invalid value for `{key}`: {message}")]
    ConfigValue { key: String, message: String },

    /// The requested experiment name is not part of the catalog.
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    /// A sweep produced a jump incompatible with a continuous objective,
    /// which points at an inconsistency in the SIR backend.
    #[error("SIR backend discontinuity: {0}")]
    SirDiscontinuity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
