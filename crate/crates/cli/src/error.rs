use std::io;
use std::path::PathBuf;

use thiserror::Error;
use vrt_core::VrtError;

/// Process exit codes. Clap exits with 2 on its own for usage errors.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CONFIG: i32 = 3;
    pub const TRACE: i32 = 4;
    pub const INFEASIBLE: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("config {path}: line {line}, column {column}: {message}")]
    ConfigSyntax {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("trace {path}: row {row}: {message}")]
    Trace {
        path: PathBuf,
        row: u64,
        message: String,
    },
    #[error("trace {path}: {message}")]
    TraceFile { path: PathBuf, message: String },
    /// A previously written artifact that does not parse back.
    #[error("{path}: row {row}: {message}")]
    Artifact {
        path: PathBuf,
        row: u64,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    /// Inputs are valid but no feasible operating point exists.
    #[error("{0}")]
    Infeasible(String),
    #[error(transparent)]
    Core(#[from] VrtError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Artifact { .. } => exit::IO,
            CliError::ConfigSyntax { .. } | CliError::Config(_) => exit::CONFIG,
            CliError::Trace { .. } | CliError::TraceFile { .. } => exit::TRACE,
            CliError::Usage(_) => exit::USAGE,
            CliError::Infeasible(_) => exit::INFEASIBLE,
            CliError::Core(VrtError::EmptyCurve { .. }) => exit::INFEASIBLE,
            CliError::Core(VrtError::MalformedTrace { .. }) => exit::TRACE,
            CliError::Core(
                VrtError::InvalidParams(_)
                | VrtError::InvalidUps(_)
                | VrtError::InfeasibleLoad { .. },
            ) => exit::CONFIG,
            CliError::Core(_) => exit::USAGE,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
