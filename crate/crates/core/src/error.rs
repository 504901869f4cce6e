use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision error: {msg} (absolute precision {abs_precision})")]
    Precision { msg: String, abs_precision: i64 },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("parse error at {path}: {msg}")]
    Parse { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precision(msg: impl Into<String>, abs_precision: i64) -> Self {
        Error::Precision { msg: msg.into(), abs_precision }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
