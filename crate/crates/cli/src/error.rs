use impactlab_core::ImpactError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ImpactError),
    /// A check the command ran did not hold.
    #[error("{0}")]
    Failed(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("config file: {0}")]
    Toml(#[from] toml::de::Error),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// 2 for bad input, 1 for numerical or I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Toml(_) => 2,
            Self::Core(e) => match e {
                ImpactError::InversionUnreliable { .. }
                | ImpactError::GridTooCoarse(_)
                | ImpactError::DivergentRecursion(_) => 1,
                _ => 2,
            },
            Self::Failed(_) | Self::Io { .. } | Self::Csv(_) | Self::Json(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
