use serde::{Deserialize, Serialize};
use vrt_core::{DispatchDecision, DispatchPolicy, SubstationParams, Thresholds, UpsConfig};

use crate::config::RunConfig;

/// Machine-readable result of `thresholds` and `dispatch`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub thresholds: Thresholds,
    pub decisions: Vec<Evaluated>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Evaluated {
    pub vs: f64,
    pub decision: DispatchDecision,
}

/// Echo of everything the numbers depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub command: String,
    pub substation: SubstationParams,
    pub ups: UpsConfig,
    pub policy: DispatchPolicy,
}

impl Provenance {
    pub fn new(command: &str, config: &RunConfig, policy: DispatchPolicy) -> Self {
        Self {
            tool: concat!("vrt ", env!("CARGO_PKG_VERSION")).to_string(),
            command: command.to_string(),
            substation: config.substation,
            ups: config.ups,
            policy,
        }
    }
}
