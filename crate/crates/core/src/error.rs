use thiserror::Error;

use crate::validate::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {path}: {message}")]
    Invalid { path: String, message: String },

    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("solution is infeasible ({} violation(s))", .0.len())]
    Infeasible(Vec<Violation>),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("enumeration guard rail exceeded: {0}")]
    GuardRail(String),

    #[error("linear relaxation failed: {0}")]
    Lp(String),
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
