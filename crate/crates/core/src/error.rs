use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("associate {0} leaves the group")]
    NotFundamental(String),
    #[error("no proxy found below prime {0}")]
    ProxyNotFound(u32),
    #[error("level {level} of class {class} is missing or incomplete")]
    MissingLevel { class: String, level: usize },
    #[error("store corruption at {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
    #[error("i/o error on group {group}: {source}")]
    GroupIo {
        group: usize,
        #[source]
        source: std::io::Error,
    },
    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }
}
