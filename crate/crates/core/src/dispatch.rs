//! Dual P/Q ride-through dispatch.
//!
//! Two source-voltage thresholds split a dip into three cases:
//!
//! - `|Vs| >= vs_m`: reactive power alone holds the rated load voltage with
//!   the grid draw inside the S_max circle ([`Case::QOnly`]).
//! - `vs_min < |Vs| < vs_m`: the operating point is moved along the power
//!   circle back inside the S_max circle, and the active power the grid no
//!   longer carries (`P_vrt`) comes from a non-grid resource
//!   ([`Case::DualPQ`]).
//! - `|Vs| <= vs_min`: even `Q = -S_max` at `P = 0` is not enough; the load
//!   has to leave the grid ([`Case::Infeasible`]).

use serde::{Deserialize, Serialize};

use crate::error::{Result, VrtError};
use crate::geometry::{q_axis_crossing, q_intersection, vs_theoretical_min};
use crate::pu::{apparent_power, q_on_circle, ROUNDOFF};
use crate::units::SubstationParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Lowest `|Vs|` served by reactive power alone within S_max.
    pub vs_m: f64,
    /// Lowest `|Vs|` at which any P/Q split keeps the grid draw within S_max.
    pub vs_min: f64,
    /// Lowest `|Vs|` that can carry `P_load` at all (delta = 90 deg).
    pub vs_theory: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    QOnly,
    DualPQ,
    Infeasible,
}

impl Case {
    /// 1, 2 or 3, in the order the cases are usually numbered.
    pub fn number(self) -> u8 {
        match self {
            Case::QOnly => 1,
            Case::DualPQ => 2,
            Case::Infeasible => 3,
        }
    }
}

/// Commanded split of the load between grid and non-grid resources.
///
/// `q_total` is the reactive power at the load bus (negative = leading),
/// all of which is supplied by the non-grid resource. For
/// [`Case::Infeasible`] every power field is zero and `disconnect` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispatchDecision {
    pub case: Case,
    pub q_total: f64,
    pub p_grid: f64,
    pub p_vrt: f64,
    pub s_grid: f64,
    pub s_nongrid: f64,
    pub delta: f64,
    pub disconnect: bool,
}

impl DispatchDecision {
    pub fn infeasible() -> Self {
        Self {
            case: Case::Infeasible,
            q_total: 0.0,
            p_grid: 0.0,
            p_vrt: 0.0,
            s_grid: 0.0,
            s_nongrid: 0.0,
            delta: 0.0,
            disconnect: true,
        }
    }
}

/// How the open choices of the dispatch are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolicy", into = "RawPolicy")]
pub struct DispatchPolicy {
    q_selection_fraction: f64,
    boundary_epsilon: f64,
}

impl DispatchPolicy {
    pub const DEFAULT_FRACTION: f64 = 0.4;
    pub const DEFAULT_EPSILON: f64 = 1e-9;

    /// `fraction` places the Case-2 reactive power between the Q-axis
    /// crossing (0) and the S_max intersection (1). `epsilon` (pu) breaks
    /// ties at the thresholds.
    pub fn new(fraction: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(VrtError::Domain {
                name: "q_selection_fraction",
                value: fraction,
                expected: "within [0, 1]",
            });
        }
        crate::error::non_negative("boundary_epsilon", epsilon)?;
        Ok(Self {
            q_selection_fraction: fraction,
            boundary_epsilon: epsilon,
        })
    }

    pub fn with_fraction(fraction: f64) -> Result<Self> {
        Self::new(fraction, Self::DEFAULT_EPSILON)
    }

    pub fn fraction(&self) -> f64 {
        self.q_selection_fraction
    }

    pub fn epsilon(&self) -> f64 {
        self.boundary_epsilon
    }
}

impl Default for DispatchPolicy {
    fn default() -> Self {
        Self {
            q_selection_fraction: Self::DEFAULT_FRACTION,
            boundary_epsilon: Self::DEFAULT_EPSILON,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolicy {
    #[serde(default = "default_fraction")]
    q_selection_fraction: f64,
    #[serde(default = "default_epsilon")]
    boundary_epsilon: f64,
}

fn default_fraction() -> f64 {
    DispatchPolicy::DEFAULT_FRACTION
}

fn default_epsilon() -> f64 {
    DispatchPolicy::DEFAULT_EPSILON
}

impl TryFrom<RawPolicy> for DispatchPolicy {
    type Error = VrtError;

    fn try_from(raw: RawPolicy) -> Result<Self> {
        Self::new(raw.q_selection_fraction, raw.boundary_epsilon)
    }
}

impl From<DispatchPolicy> for RawPolicy {
    fn from(p: DispatchPolicy) -> Self {
        RawPolicy {
            q_selection_fraction: p.q_selection_fraction,
            boundary_epsilon: p.boundary_epsilon,
        }
    }
}

/// Source voltage whose power circle passes through `(0, -s_max)`.
pub fn vs_min_threshold(params: &SubstationParams) -> f64 {
    vs_min_with(params.x(), params.s_max(), params.v_l())
}

/// `(vl^2 - x s_max) / vl`; `1 - x s_max` at unity load voltage.
pub fn vs_min_with(x: f64, s_max: f64, vl: f64) -> f64 {
    (vl * vl - x * s_max) / vl
}

/// Source voltage whose power circle passes through the point of the S_max
/// circle on the load line, `(P_load, -sqrt(S_max^2 - P_load^2))`.
pub fn vs_m_threshold(params: &SubstationParams) -> Result<f64> {
    vs_m_with(params.x(), params.s_max(), params.v_l(), params.p_load())
}

/// At unity load voltage this is `sqrt(1 + x^2 s^2 - 2 x sqrt(s^2 - p^2))`.
pub fn vs_m_with(x: f64, s_max: f64, vl: f64, p_load: f64) -> Result<f64> {
    if p_load > s_max {
        return Err(VrtError::InfeasibleLoad { p_load, s_max });
    }
    let q_headroom = ((s_max - p_load) * (s_max + p_load)).sqrt();
    let offset = vl * vl / x - q_headroom;
    Ok(x / vl * p_load.hypot(offset))
}

pub fn thresholds(params: &SubstationParams) -> Thresholds {
    Thresholds {
        vs_m: vs_m_threshold(params).expect("validated params keep p_load <= s_max"),
        vs_min: vs_min_threshold(params),
        vs_theory: vs_theoretical_min(params.p_load(), params.v_l(), params.x()),
    }
}

/// Ties within `epsilon` of a threshold go to the less demanding side:
/// `QOnly` at `vs_m`, `Infeasible` at `vs_min`.
pub fn classify(vs: f64, params: &SubstationParams, policy: &DispatchPolicy) -> Case {
    let th = thresholds(params);
    let eps = policy.epsilon();
    if vs <= th.vs_min + eps {
        Case::Infeasible
    } else if vs >= th.vs_m - eps {
        Case::QOnly
    } else {
        Case::DualPQ
    }
}

fn power_angle(params: &SubstationParams, p: f64, q: f64) -> f64 {
    // p = r sin(delta), q + c = r cos(delta)
    let c = params.v_l() * params.v_l() / params.x();
    p.atan2(q + c)
}

/// Reactive power alone: the grid carries all of `P_load`.
pub fn dispatch_case1(vs: f64, params: &SubstationParams) -> Result<DispatchDecision> {
    let p = params.p_load();
    let q = q_on_circle(vs, params.v_l(), params.x(), p)?;
    Ok(DispatchDecision {
        case: Case::QOnly,
        q_total: q,
        p_grid: p,
        p_vrt: 0.0,
        s_grid: apparent_power(p, q),
        s_nongrid: q.abs(),
        delta: power_angle(params, p, q),
        disconnect: false,
    })
}

/// Reactive power chosen between the Q-axis crossing and the S_max
/// intersection of the power circle; the grid carries the active power the
/// circle allows there and the non-grid resource supplies the rest.
pub fn dispatch_case2(
    vs: f64,
    params: &SubstationParams,
    policy: &DispatchPolicy,
) -> Result<DispatchDecision> {
    let vl = params.v_l();
    let x = params.x();
    let p_load = params.p_load();
    let q_min = q_axis_crossing(vs, vl, x);
    let q_ints = q_intersection(vs, params);
    let q_sel = q_min + policy.fraction() * (q_ints - q_min);

    let radius = vs * vl / x;
    let shifted = q_sel + vl * vl / x;
    let mut arg = (radius - shifted) * (radius + shifted);
    if arg < 0.0 {
        if arg < -ROUNDOFF * radius * radius {
            return Err(VrtError::Inconsistent(format!(
                "Q = {q_sel} is off the power circle for |Vs| = {vs}"
            )));
        }
        arg = 0.0;
    }
    let p_circle = arg.sqrt();
    if p_circle > p_load * (1.0 + ROUNDOFF) {
        return Err(VrtError::Inconsistent(format!(
            "grid P = {p_circle} exceeds load P = {p_load} at |Vs| = {vs}; not a Case-2 voltage"
        )));
    }
    // Both differences are exact in floating point, so p_grid + p_vrt == p_load.
    let p_vrt = (p_load - p_circle).max(0.0);
    let p_grid = p_load - p_vrt;
    Ok(DispatchDecision {
        case: Case::DualPQ,
        q_total: q_sel,
        p_grid,
        p_vrt,
        s_grid: apparent_power(p_grid, q_sel),
        s_nongrid: apparent_power(p_vrt, q_sel),
        delta: power_angle(params, p_grid, q_sel),
        disconnect: false,
    })
}

pub fn dispatch(
    vs: f64,
    params: &SubstationParams,
    policy: &DispatchPolicy,
) -> Result<DispatchDecision> {
    crate::error::non_negative("vs", vs)?;
    match classify(vs, params, policy) {
        Case::QOnly => dispatch_case1(vs, params),
        Case::DualPQ => dispatch_case2(vs, params, policy),
        Case::Infeasible => Ok(DispatchDecision::infeasible()),
    }
}
