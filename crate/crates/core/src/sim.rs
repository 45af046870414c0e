//! Discrete-time replay of a source-voltage dip through the dispatcher and an
//! idealized UPS.
//!
//! Samples are held (zero-order) until the next one, so a timer advances by
//! the interval since the previous sample whenever its condition held at
//! that previous sample and still holds now.
//!
//! UPS state machine:
//!
//! ```text
//!            load-bus voltage outside [v_low, v_high] for transfer_delay,
//!            or no operating point (collapse / infeasible dispatch)
//!   OnGrid ───────────────────────────────────────────────────────► Emergency
//!     ▲                                                                 │
//!     │ recovery held for reconnect_delay          vs >= reconnect_threshold
//!     │                                                                 ▼
//!     └──────────────────────────── ReconnectWait ◄─────────────────────┘
//!                                        │ recovery lost
//!                                        └──────────────► Emergency
//! ```
//!
//! The compensation resource is ideal: it follows the dispatch exactly within
//! the sample it is commanded.

use serde::{Deserialize, Serialize};

use crate::dispatch::{dispatch, Case, DispatchPolicy};
use crate::error::{Result, VrtError};
use crate::geometry::uncompensated_load_voltage;
use crate::units::SubstationParams;

/// Slack on timer comparisons so that e.g. twenty 1 ms steps satisfy a 20 ms
/// delay despite rounding in the accumulated sum.
const TIME_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DipTrace {
    samples: Vec<(f64, f64)>,
}

impl DipTrace {
    /// `(t seconds, |Vs| pu)` pairs; times strictly increasing, `|Vs| >= 0`.
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(VrtError::MalformedTrace {
                index: 0,
                reason: "trace has no samples".into(),
            });
        }
        for (i, &(t, vs)) in samples.iter().enumerate() {
            if !t.is_finite() {
                return Err(malformed(i, format!("time {t} is not finite")));
            }
            if !vs.is_finite() || vs < 0.0 {
                return Err(malformed(i, format!("vs = {vs} must be finite and >= 0")));
            }
            if i > 0 && t <= samples[i - 1].0 {
                return Err(malformed(
                    i,
                    format!("time {t} does not increase past {}", samples[i - 1].0),
                ));
            }
        }
        Ok(Self { samples })
    }

    /// Nominal voltage with a rectangular dip, sampled every `dt` seconds on
    /// an integer grid from 0 to `t_end` inclusive.
    pub fn rectangular(
        vs_nominal: f64,
        vs_dip: f64,
        dip_start: f64,
        dip_duration: f64,
        t_end: f64,
        dt: f64,
    ) -> Result<Self> {
        crate::error::positive("dt", dt)?;
        let steps = (t_end / dt).round() as usize;
        let first = (dip_start / dt).round() as usize;
        let last = first + (dip_duration / dt).round() as usize;
        let samples = (0..=steps)
            .map(|i| {
                let vs = if (first..last).contains(&i) {
                    vs_dip
                } else {
                    vs_nominal
                };
                (i as f64 * dt, vs)
            })
            .collect();
        Self::new(samples)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples[self.samples.len() - 1].0 - self.samples[0].0
    }
}

fn malformed(index: usize, reason: String) -> VrtError {
    VrtError::MalformedTrace { index, reason }
}

/// UPS input window and transfer timing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawUps", into = "RawUps")]
pub struct UpsConfig {
    pub v_low: f64,
    pub v_high: f64,
    pub transfer_delay: f64,
    pub reconnect_threshold: f64,
    pub reconnect_delay: f64,
}

impl UpsConfig {
    pub fn new(
        v_low: f64,
        v_high: f64,
        transfer_delay: f64,
        reconnect_threshold: f64,
        reconnect_delay: f64,
    ) -> Result<Self> {
        let all = [
            v_low,
            v_high,
            transfer_delay,
            reconnect_threshold,
            reconnect_delay,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(VrtError::InvalidUps("all fields must be finite".into()));
        }
        if !(v_low < reconnect_threshold && reconnect_threshold <= v_high) {
            return Err(VrtError::InvalidUps(format!(
                "need v_low < reconnect_threshold <= v_high, got {v_low}, {reconnect_threshold}, {v_high}"
            )));
        }
        if transfer_delay < 0.0 || reconnect_delay < 0.0 {
            return Err(VrtError::InvalidUps("delays must be >= 0".into()));
        }
        Ok(Self {
            v_low,
            v_high,
            transfer_delay,
            reconnect_threshold,
            reconnect_delay,
        })
    }

    pub fn in_window(&self, vl: f64) -> bool {
        (self.v_low..=self.v_high).contains(&vl)
    }
}

impl Default for UpsConfig {
    fn default() -> Self {
        Self {
            v_low: 0.85,
            v_high: 1.15,
            transfer_delay: 0.02,
            reconnect_threshold: 0.9,
            reconnect_delay: 10.0,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUps {
    #[serde(default = "ups_default::v_low")]
    v_low: f64,
    #[serde(default = "ups_default::v_high")]
    v_high: f64,
    #[serde(default = "ups_default::transfer_delay")]
    transfer_delay: f64,
    #[serde(default = "ups_default::reconnect_threshold")]
    reconnect_threshold: f64,
    #[serde(default = "ups_default::reconnect_delay")]
    reconnect_delay: f64,
}

mod ups_default {
    use super::UpsConfig;

    pub fn v_low() -> f64 {
        UpsConfig::default().v_low
    }
    pub fn v_high() -> f64 {
        UpsConfig::default().v_high
    }
    pub fn transfer_delay() -> f64 {
        UpsConfig::default().transfer_delay
    }
    pub fn reconnect_threshold() -> f64 {
        UpsConfig::default().reconnect_threshold
    }
    pub fn reconnect_delay() -> f64 {
        UpsConfig::default().reconnect_delay
    }
}

impl TryFrom<RawUps> for UpsConfig {
    type Error = VrtError;

    fn try_from(r: RawUps) -> Result<Self> {
        Self::new(
            r.v_low,
            r.v_high,
            r.transfer_delay,
            r.reconnect_threshold,
            r.reconnect_delay,
        )
    }
}

impl From<UpsConfig> for RawUps {
    fn from(u: UpsConfig) -> Self {
        RawUps {
            v_low: u.v_low,
            v_high: u.v_high,
            transfer_delay: u.transfer_delay,
            reconnect_threshold: u.reconnect_threshold,
            reconnect_delay: u.reconnect_delay,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    OnGrid,
    Emergency,
    ReconnectWait,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::OnGrid => "OnGrid",
            Mode::Emergency => "Emergency",
            Mode::ReconnectWait => "ReconnectWait",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub mode: Mode,
    /// Time the current trigger (out-of-window while on grid, recovery while
    /// waiting to reconnect) has held.
    pub window_timer: f64,
    pub compensation_active: bool,
    /// Whether the trigger held at the previous sample.
    pub condition_held: bool,
    pub last_t: Option<f64>,
}

impl Default for SimState {
    fn default() -> Self {
        Self {
            mode: Mode::OnGrid,
            window_timer: 0.0,
            compensation_active: false,
            condition_held: false,
            last_t: None,
        }
    }
}

/// Dispatch case applied at a sample; `NoCompNeeded` when compensation is
/// disabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RecordCase {
    NoCompNeeded,
    QOnly,
    DualPQ,
    Infeasible,
}

impl From<Case> for RecordCase {
    fn from(c: Case) -> Self {
        match c {
            Case::QOnly => RecordCase::QOnly,
            Case::DualPQ => RecordCase::DualPQ,
            Case::Infeasible => RecordCase::Infeasible,
        }
    }
}

impl RecordCase {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordCase::NoCompNeeded => "NoCompNeeded",
            RecordCase::QOnly => "QOnly",
            RecordCase::DualPQ => "DualPQ",
            RecordCase::Infeasible => "Infeasible",
        }
    }
}

/// One logged sample. Commands are zero whenever the load is off the grid;
/// `vl_effective` is then the unloaded bus voltage, i.e. `vs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub t: f64,
    pub vs: f64,
    pub case: RecordCase,
    pub vl_effective: f64,
    pub q_cmd: f64,
    pub p_vrt_cmd: f64,
    pub mode: Mode,
    pub on_grid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub time_off_grid: f64,
    pub max_abs_q: f64,
    pub max_p_vrt: f64,
    /// Trapezoidal integral of the commanded non-grid active power, pu * s.
    pub nongrid_energy: f64,
    pub disconnect_count: u32,
    pub deepest_vs: f64,
}

/// What the load bus would look like with the load on the grid at this sample.
struct Electrical {
    case: RecordCase,
    /// `None` when there is no operating point at all.
    vl: Option<f64>,
    q: f64,
    p_vrt: f64,
}

fn evaluate(
    vs: f64,
    params: &SubstationParams,
    policy: &DispatchPolicy,
    compensation_enabled: bool,
) -> Electrical {
    if compensation_enabled {
        match dispatch(vs, params, policy) {
            Ok(d) if d.case != Case::Infeasible => Electrical {
                case: d.case.into(),
                vl: Some(params.v_l()),
                q: d.q_total,
                p_vrt: d.p_vrt,
            },
            _ => Electrical {
                case: RecordCase::Infeasible,
                vl: None,
                q: 0.0,
                p_vrt: 0.0,
            },
        }
    } else {
        let vl = if vs > 0.0 {
            uncompensated_load_voltage(vs, params.p_load(), params.x()).ok()
        } else {
            None
        };
        Electrical {
            case: RecordCase::NoCompNeeded,
            vl,
            q: 0.0,
            p_vrt: 0.0,
        }
    }
}

/// Advances the simulation by one sample.
pub fn step(
    state: &SimState,
    sample: (f64, f64),
    params: &SubstationParams,
    ups: &UpsConfig,
    policy: &DispatchPolicy,
    compensation_enabled: bool,
) -> (SimState, SimRecord) {
    let (t, vs) = sample;
    let dt = state.last_t.map_or(0.0, |prev| (t - prev).max(0.0));
    let elec = evaluate(vs, params, policy, compensation_enabled);

    let mut next = SimState {
        last_t: Some(t),
        ..*state
    };
    match state.mode {
        Mode::OnGrid => match elec.vl {
            None => to_mode(&mut next, Mode::Emergency),
            Some(vl) if !ups.in_window(vl) => {
                hold(&mut next, state.condition_held, dt);
                if next.window_timer + TIME_EPS >= ups.transfer_delay {
                    to_mode(&mut next, Mode::Emergency);
                }
            }
            Some(_) => release(&mut next),
        },
        Mode::Emergency => {
            if vs >= ups.reconnect_threshold {
                to_mode(&mut next, Mode::ReconnectWait);
                next.condition_held = true;
            }
        }
        Mode::ReconnectWait => {
            if vs >= ups.reconnect_threshold && elec.vl.is_some() {
                hold(&mut next, state.condition_held, dt);
                if next.window_timer + TIME_EPS >= ups.reconnect_delay {
                    to_mode(&mut next, Mode::OnGrid);
                }
            } else {
                to_mode(&mut next, Mode::Emergency);
            }
        }
    }

    let on_grid = next.mode == Mode::OnGrid;
    next.compensation_active = on_grid && compensation_enabled && elec.vl.is_some();
    let (vl_effective, q_cmd, p_vrt_cmd) = match (on_grid, elec.vl) {
        (true, Some(vl)) => (vl, elec.q, elec.p_vrt),
        _ => (vs, 0.0, 0.0),
    };
    let record = SimRecord {
        t,
        vs,
        case: elec.case,
        vl_effective,
        q_cmd,
        p_vrt_cmd,
        mode: next.mode,
        on_grid,
    };
    (next, record)
}

fn to_mode(state: &mut SimState, mode: Mode) {
    state.mode = mode;
    state.window_timer = 0.0;
    state.condition_held = false;
}

fn hold(state: &mut SimState, held_before: bool, dt: f64) {
    if held_before {
        state.window_timer += dt;
    } else {
        state.window_timer = 0.0;
    }
    state.condition_held = true;
}

fn release(state: &mut SimState) {
    state.window_timer = 0.0;
    state.condition_held = false;
}

/// Replays the whole trace from an on-grid start.
pub fn run(
    trace: &DipTrace,
    params: &SubstationParams,
    ups: &UpsConfig,
    policy: &DispatchPolicy,
    compensation_enabled: bool,
) -> Vec<SimRecord> {
    let mut state = SimState::default();
    trace
        .samples()
        .iter()
        .map(|&sample| {
            let (next, record) = step(&state, sample, params, ups, policy, compensation_enabled);
            state = next;
            record
        })
        .collect()
}

pub fn summarize(log: &[SimRecord]) -> Result<SimSummary> {
    let first = log.first().ok_or(VrtError::EmptyLog)?;
    let mut summary = SimSummary {
        time_off_grid: 0.0,
        max_abs_q: 0.0,
        max_p_vrt: 0.0,
        nongrid_energy: 0.0,
        disconnect_count: 0,
        deepest_vs: first.vs,
    };
    let mut was_on_grid = true;
    for (i, rec) in log.iter().enumerate() {
        if was_on_grid && !rec.on_grid {
            summary.disconnect_count += 1;
        }
        was_on_grid = rec.on_grid;
        summary.max_abs_q = summary.max_abs_q.max(rec.q_cmd.abs());
        summary.max_p_vrt = summary.max_p_vrt.max(rec.p_vrt_cmd);
        summary.deepest_vs = summary.deepest_vs.min(rec.vs);
        if i > 0 {
            let prev = &log[i - 1];
            let dt = rec.t - prev.t;
            if !prev.on_grid {
                summary.time_off_grid += dt;
            }
            summary.nongrid_energy += 0.5 * (prev.p_vrt_cmd + rec.p_vrt_cmd) * dt;
        }
    }
    Ok(summary)
}
