use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] schrograph_core::Error),
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error("bad key `{key}`: {reason}")]
    BadKey { key: String, reason: String },
    #[error("key `{0}` names a coefficient that is already set")]
    DuplicateKey(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// What goes to standard error on failure.
#[derive(Debug, Serialize)]
pub struct ErrorObject<'a> {
    pub code: &'a str,
    pub message: String,
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Parse { .. } => "E_PARSE",
            CliError::BadKey { .. } => "E_BAD_KEY",
            CliError::DuplicateKey(_) => "E_DUPLICATE_KEY",
            CliError::Io { .. } => "E_IO",
            CliError::Usage(_) => "E_USAGE",
        }
    }

    /// 1 for I/O trouble, 2 for anything wrong with the inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorObject { code: self.code(), message: self.to_string() }).expect("plain strings")
    }

    pub(crate) fn bad_key(key: &str, reason: impl Into<String>) -> Self {
        CliError::BadKey { key: key.into(), reason: reason.into() }
    }
}
