//! Command-line front end for `vrt_core`: JSON configuration, trace
//! ingestion, and CSV/JSON/SVG artifacts.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod number;
pub mod output;
pub mod report;
pub mod style;
pub mod svg;
pub mod trace;

pub use args::{Cli, Command};
pub use commands::{execute, Outcome};
pub use config::RunConfig;
pub use error::{exit, CliError};
pub use report::{Evaluated, Provenance, Report};
