use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hopfkit_core::Error),

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },

    #[error("{0}")]
    Usage(String),

    #[error("HOPFKIT_SEED is set, but no computation uses randomness")]
    SeedRejected,
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Read { .. } | CliError::Write { .. } => "E_IO",
            CliError::Json { .. } => "E_SCHEMA",
            CliError::Usage(_) => "E_USAGE",
            CliError::SeedRejected => "E_ENV",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.code() {
            "E_SCHEMA" => 2,
            "E_GROUP_AXIOM" => 3,
            "E_PEIFFER" => 4,
            "E_ILLEGAL_MOVE" => 5,
            "E_INPUT" => 6,
            "E_INVARIANT" => 7,
            "E_IO" => 8,
            "E_ENV" => 9,
            _ => 64,
        }
    }
}
