use std::path::PathBuf;

use rigan_core::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFICATION: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const DOMAIN: i32 = 3;
    pub const MISMATCH: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Write { .. } => exit::USAGE,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Parameter(_) | Error::Crystalline(_) | Error::Context(_) => exit::USAGE,
        Error::Domain(_) | Error::DivisionByZero | Error::Precision(_) | Error::Factorization(_) => exit::DOMAIN,
        Error::Cell { source, .. } => core_exit_code(source),
        Error::Mismatch(_) | Error::ContextMismatch => exit::MISMATCH,
        Error::BoundViolation { .. } | Error::Invariant(_) => exit::VERIFICATION,
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
