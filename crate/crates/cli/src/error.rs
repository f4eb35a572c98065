//! CLI-side error type and the process exit-code contract:
//! 0 success, 2 configuration/validation, 3 generation stalled, 4 I/O.

use std::fmt;
use std::path::PathBuf;

use privsynth::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, flags, or input schema.
    Config(String),
    /// CSV content problem, with a 1-based line number when known.
    Csv {
        path: PathBuf,
        line: Option<u64>,
        message: String,
    },
    Core(CoreError),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Json(serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Csv { .. } => 2,
            CliError::Core(CoreError::GenerationStalled { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } | CliError::Json(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Csv {
                path,
                line,
                message,
            } => match line {
                Some(l) => write!(f, "{}:{l}: {message}", path.display()),
                None => write!(f, "{}: {message}", path.display()),
            },
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Json(e) => write!(f, "JSON error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
