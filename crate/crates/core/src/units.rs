//! Per-unit scalars and the substation parameter set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VrtError};

/// A finite, dimensionless quantity on the substation MVA/kV base.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PerUnit(f64);

impl PerUnit {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(VrtError::Domain {
                name: "per-unit value",
                value,
                expected: "finite",
            })
        }
    }

    /// Voltage magnitudes and apparent powers: finite and non-negative.
    pub fn magnitude(value: f64) -> Result<Self> {
        crate::error::non_negative("per-unit magnitude", value).map(Self)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<PerUnit> for f64 {
    fn from(v: PerUnit) -> f64 {
        v.0
    }
}

impl fmt::Display for PerUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} pu", self.0)
    }
}

/// Series reactance, apparent-power limit, target load voltage and load
/// power of a substation feeding a constant-power load.
///
/// Validated at construction:
/// `x > 0`, `s_max > 0`, `v_l > 0`, `0 <= p_load <= s_max` and
/// `x * s_max < v_l^2` (otherwise no dip at all could be compensated).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SubstationParams {
    x: PerUnit,
    s_max: PerUnit,
    v_l: PerUnit,
    p_load: PerUnit,
}

impl SubstationParams {
    pub fn new(x: f64, s_max: f64, v_l: f64, p_load: f64) -> Result<Self> {
        let invalid = |msg: String| Err(VrtError::InvalidParams(msg));
        for (name, v) in [("x", x), ("s_max", s_max), ("v_l", v_l), ("p_load", p_load)] {
            if !v.is_finite() {
                return invalid(format!("{name} = {v} is not finite"));
            }
        }
        if x <= 0.0 {
            return invalid(format!("x = {x} must be > 0"));
        }
        if s_max <= 0.0 {
            return invalid(format!("s_max = {s_max} must be > 0"));
        }
        if v_l <= 0.0 {
            return invalid(format!("v_l = {v_l} must be > 0"));
        }
        if p_load < 0.0 || p_load > s_max {
            return invalid(format!(
                "p_load = {p_load} must lie in [0, s_max = {s_max}]"
            ));
        }
        if x * s_max >= v_l * v_l {
            return invalid(format!(
                "x * s_max = {} must be < v_l^2 = {}",
                x * s_max,
                v_l * v_l
            ));
        }
        Ok(Self {
            x: PerUnit(x),
            s_max: PerUnit(s_max),
            v_l: PerUnit(v_l),
            p_load: PerUnit(p_load),
        })
    }

    /// X = 0.2, S_max = 1.3, V_L = 1.0, P_load = 0.9.
    pub fn reference() -> Self {
        Self::new(0.2, 1.3, 1.0, 0.9).expect("default parameters are valid")
    }

    /// Same substation and load held at a different load-bus voltage, e.g.
    /// a reduced but still acceptable 0.9 pu during a deep dip.
    pub fn with_target_vl(&self, v_l: f64) -> Result<Self> {
        Self::new(self.x(), self.s_max(), v_l, self.p_load())
    }

    pub fn with_p_load(&self, p_load: f64) -> Result<Self> {
        Self::new(self.x(), self.s_max(), self.v_l(), p_load)
    }

    pub fn x(&self) -> f64 {
        self.x.0
    }

    pub fn s_max(&self) -> f64 {
        self.s_max.0
    }

    pub fn v_l(&self) -> f64 {
        self.v_l.0
    }

    pub fn p_load(&self) -> f64 {
        self.p_load.0
    }
}

impl Default for SubstationParams {
    fn default() -> Self {
        Self::reference()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(default = "defaults::x")]
    x: f64,
    #[serde(default = "defaults::s_max")]
    s_max: f64,
    #[serde(default = "defaults::v_l")]
    v_l: f64,
    #[serde(default = "defaults::p_load")]
    p_load: f64,
}

mod defaults {
    pub fn x() -> f64 {
        0.2
    }
    pub fn s_max() -> f64 {
        1.3
    }
    pub fn v_l() -> f64 {
        1.0
    }
    pub fn p_load() -> f64 {
        0.9
    }
}

impl TryFrom<RawParams> for SubstationParams {
    type Error = VrtError;

    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw.x, raw.s_max, raw.v_l, raw.p_load)
    }
}

impl From<SubstationParams> for RawParams {
    fn from(p: SubstationParams) -> Self {
        RawParams {
            x: p.x(),
            s_max: p.s_max(),
            v_l: p.v_l(),
            p_load: p.p_load(),
        }
    }
}
