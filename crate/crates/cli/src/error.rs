use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] gridmono::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for malformed or unsupported input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                gridmono::Error::Inconsistent(_) => 1,
                _ => 2,
            },
            CliError::Io { .. } | CliError::Csv(_) => 1,
        }
    }
}
