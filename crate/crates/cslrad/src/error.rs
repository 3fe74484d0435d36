use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("numerical failure: {0}")]
    Numerical(#[from] cslrad_core::Error),
    #[error("{failed} verification check(s) failed")]
    Verify { failed: usize },
}

impl CliError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { path: path.into(), message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 1 config or file problem, 2 numerical failure, 3 verification failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 1,
            // invalid inputs or unsupported model combinations reached during evaluation
            CliError::Numerical(cslrad_core::Error::Domain(_) | cslrad_core::Error::Contract(_)) => 1,
            CliError::Numerical(_) => 2,
            CliError::Verify { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
