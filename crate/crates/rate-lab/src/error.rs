//! Error type of the laboratory harness.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid decimal '{text}': {reason}")]
    BadDecimal { text: String, reason: &'static str },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("config file line {line}: {reason}")]
    ConfigFile { line: usize, reason: String },

    #[error("slope fit needs {0}")]
    Fit(&'static str),

    #[error("regime classification requires every shape parameter >= -1/2; shape {index} is {value}")]
    RegimeDomain { index: usize, value: String },

    #[error("regime classification requires n >= 3; got {0}")]
    SmallCount(usize),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report serialization: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Core(#[from] laguerre_core::Error),

    #[error(transparent)]
    Transport(#[from] transport::Error),

    #[error(transparent)]
    Pipeline(#[from] proof_pipeline::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
