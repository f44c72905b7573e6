use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] io::Error),

    #[error("xml parse error at line {line}: {message}")]
    Xml { line: usize, message: String },

    #[error("tsv format error at line {line}: {message}")]
    Tsv { line: usize, message: String },

    #[error("empty memory: no translation units extracted")]
    EmptyMemory,

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("fuzzy-match score undefined for two empty segments")]
    EmptyComparison,

    #[error("not a {expected} file")]
    BadMagic { expected: &'static str },

    #[error("unsupported {what} version {found} (expected {expected})")]
    Version {
        what: &'static str,
        found: u32,
        expected: u32,
    },

    #[error("corrupt {what}: {message}")]
    Corrupt { what: &'static str, message: String },

    #[error("model error: {0}")]
    Model(String),

    #[error("predictor error: {0}")]
    Predictor(String),

    #[error("dataset error at line {line}: {message}")]
    Dataset { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable identifier used in machine-readable CLI error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io(_) => "io",
            Error::Xml { .. } => "xml",
            Error::Tsv { .. } => "tsv",
            Error::EmptyMemory => "empty-memory",
            Error::InvalidSplit(_) => "split",
            Error::Index(_) => "index",
            Error::EmptyComparison => "empty-comparison",
            Error::BadMagic { .. } => "bad-magic",
            Error::Version { .. } => "version",
            Error::Corrupt { .. } => "corrupt",
            Error::Model(_) => "model",
            Error::Predictor(_) => "predictor",
            Error::Dataset { .. } => "dataset",
            Error::Config(_) => "config",
            Error::Json(_) => "json",
        }
    }
}
