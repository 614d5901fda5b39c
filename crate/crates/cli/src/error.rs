use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {source}")]
    Config {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error(transparent)]
    Core(#[from] domcftp::Error),
    #[error("{failed} of {total} replicates failed; first error: {first}")]
    Replicates {
        failed: usize,
        total: usize,
        first: domcftp::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    /// 2 for bad input, 3 for non-coalescence, 4 for an internal invariant
    /// violation.
    pub fn exit_code(&self) -> i32 {
        let core = match self {
            Self::Core(e) => e,
            Self::Replicates { first, .. } => first,
            _ => return 2,
        };
        match core {
            domcftp::Error::NonCoalescence { .. } => 3,
            domcftp::Error::Invariant(_) => 4,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
