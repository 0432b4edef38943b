use std::path::PathBuf;

use dtc_core::Error as CoreError;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("spec error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("unknown preset `{name}`; available presets: {}", available.join(", "))]
    UnknownPreset { name: String, available: Vec<String> },
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema { path: path.into(), message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } | CliError::UnknownPreset { .. } | CliError::Usage(_) => EXIT_SCHEMA,
            CliError::Core(e) => match e {
                CoreError::UnsupportedModel(_) | CoreError::UnsupportedSize { .. } => EXIT_CAPABILITY,
                CoreError::InvalidConfig(_) | CoreError::DimensionMismatch { .. } | CoreError::OddSeriesLength(_) => {
                    EXIT_SCHEMA
                }
                _ => EXIT_FAILURE,
            },
            CliError::Io { .. } => EXIT_FAILURE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
