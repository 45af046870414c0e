//! Run configuration: one JSON document, per-unit quantities and SI seconds,
//! unknown keys rejected at every level.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vrt_core::{DispatchPolicy, SubstationParams, UpsConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub substation: SubstationParams,
    #[serde(default)]
    pub ups: UpsConfig,
    #[serde(default)]
    pub policy: DispatchPolicy,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            substation: SubstationParams::default(),
            ups: UpsConfig::default(),
            policy: DispatchPolicy::default(),
            output_dir: default_output_dir(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::ConfigSyntax {
            path: origin.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, path)
    }

    /// Creates the output directory if needed and checks that it is a directory.
    pub fn prepare_output_dir(&self) -> Result<&Path> {
        let dir = self.output_dir.as_path();
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let meta = fs::metadata(dir).map_err(|e| CliError::io(dir, e))?;
        if meta.permissions().readonly() {
            return Err(CliError::Config(format!(
                "output_dir {} is not writable",
                dir.display()
            )));
        }
        Ok(dir)
    }
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}
