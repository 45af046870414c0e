//! PQ-plane geometry: power circles at constant load voltage, the
//! origin-centred S_max circle, their crossings, and the apparent power
//! needed to hold the load voltage as the source voltage varies.
//!
//! Everything here is numeric; rendering lives in the CLI.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, positive, Result, VrtError};
use crate::pu::{apparent_power, q_on_circle, receiving_end_pq, ROUNDOFF};
use crate::units::SubstationParams;

/// Locus of load-side (P, Q) at fixed `|Vs|`, `|V_L|` and `X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerCircle {
    pub vs: f64,
    /// Q coordinate of the centre, `-V_L^2 / X`. The P coordinate is 0.
    pub center_q: f64,
    pub radius: f64,
}

impl PowerCircle {
    /// Signed residual of the circle equation at `(p, q)`, relative to `radius^2`.
    pub fn relative_residual(&self, p: f64, q: f64) -> f64 {
        let dq = q - self.center_q;
        (p * p + dq * dq - self.radius * self.radius) / (self.radius * self.radius)
    }
}

/// One sampled point. `angle` is the power angle delta for power circles and
/// the polar angle (from the +P axis) for the S_max circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub angle: f64,
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleLocus {
    /// Source voltage of a power circle; `None` for the S_max circle.
    pub vs: Option<f64>,
    pub points: Vec<LocusPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SCurvePoint {
    pub vs: f64,
    pub q: f64,
    pub s: f64,
}

pub fn circle_of(vs: f64, vl: f64, x: f64) -> Result<PowerCircle> {
    let vs = positive("vs", vs)?;
    let vl = positive("vl", vl)?;
    let x = positive("x", x)?;
    Ok(PowerCircle {
        vs,
        center_q: -vl * vl / x,
        radius: vs * vl / x,
    })
}

fn check_points(n_points: usize) -> Result<()> {
    if n_points < 2 {
        return Err(VrtError::Domain {
            name: "n_points",
            value: n_points as f64,
            expected: ">= 2",
        });
    }
    Ok(())
}

/// `i`-th of `n` uniform samples over `[lo, hi]`, with both ends exact.
fn uniform(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    }
}

/// Stable arcs (delta from 0 to 90 deg, uniform in delta) of the power
/// circles for each source voltage in `vs_list`, at the rated load voltage.
pub fn circle_family(
    params: &SubstationParams,
    vs_list: &[f64],
    n_points: usize,
) -> Result<Vec<CircleLocus>> {
    check_points(n_points)?;
    vs_list
        .iter()
        .map(|&vs| {
            let points = (0..n_points)
                .map(|i| {
                    let delta = uniform(0.0, FRAC_PI_2, i, n_points);
                    let (p, q) = receiving_end_pq(vs, params.v_l(), params.x(), delta)?;
                    Ok(LocusPoint { angle: delta, p, q })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CircleLocus {
                vs: Some(vs),
                points,
            })
        })
        .collect()
}

/// Right half (P >= 0) of the S_max circle, from `(0, -s_max)` through
/// `(s_max, 0)` to `(0, s_max)`.
pub fn s_max_circle(s_max: f64, n_points: usize) -> Result<CircleLocus> {
    let s_max = positive("s_max", s_max)?;
    check_points(n_points)?;
    let points = (0..n_points)
        .map(|i| {
            let angle = uniform(-FRAC_PI_2, FRAC_PI_2, i, n_points);
            let (p, q) = if i == 0 {
                (0.0, -s_max)
            } else if i + 1 == n_points {
                (0.0, s_max)
            } else {
                let (sin, cos) = angle.sin_cos();
                (s_max * cos, s_max * sin)
            };
            LocusPoint { angle, p, q }
        })
        .collect();
    Ok(CircleLocus { vs: None, points })
}

/// Reactive power where the power circle for `vs` meets the S_max circle.
pub fn q_intersection(vs: f64, params: &SubstationParams) -> f64 {
    q_intersection_with(vs, params.v_l(), params.x(), params.s_max())
}

/// `(vs^2 - vl^2 - x^2 s_max^2 / vl^2) / (2 x)`
pub fn q_intersection_with(vs: f64, vl: f64, x: f64, s_max: f64) -> f64 {
    (vs * vs - vl * vl - x * x * s_max * s_max / (vl * vl)) / (2.0 * x)
}

/// Reactive power where the power circle crosses the Q axis (delta = 0,
/// P = 0): the smallest |Q| on the stable arc.
pub fn q_axis_crossing(vs: f64, vl: f64, x: f64) -> f64 {
    vl * (vs - vl) / x
}

/// Lowest source voltage that can carry `p` at all (delta = 90 deg).
pub fn vs_theoretical_min(p: f64, vl: f64, x: f64) -> f64 {
    p * x / vl
}

/// Apparent power at the load needed to hold `V_L` with constant `P_load`
/// for `n` source voltages uniformly spaced over `[vs_lo, vs_hi]`.
/// Samples that cannot carry `P_load` at any stable angle are left out.
pub fn s_curve(
    params: &SubstationParams,
    vs_lo: f64,
    vs_hi: f64,
    n: usize,
) -> Result<Vec<SCurvePoint>> {
    let vs_lo = non_negative("vs_lo", vs_lo)?;
    let vs_hi = positive("vs_hi", vs_hi)?;
    if vs_lo >= vs_hi {
        return Err(VrtError::Domain {
            name: "vs_hi",
            value: vs_hi,
            expected: "> vs_lo",
        });
    }
    check_points(n)?;
    let p = params.p_load();
    let curve: Vec<SCurvePoint> = (0..n)
        .map(|i| uniform(vs_lo, vs_hi, i, n))
        .filter(|&vs| vs > 0.0)
        .filter_map(|vs| {
            q_on_circle(vs, params.v_l(), params.x(), p)
                .ok()
                .map(|q| SCurvePoint {
                    vs,
                    q,
                    s: apparent_power(p, q),
                })
        })
        .collect();
    if curve.is_empty() {
        return Err(VrtError::EmptyCurve {
            vs_lo,
            vs_hi,
            vs_theory: vs_theoretical_min(p, params.v_l(), params.x()),
        });
    }
    Ok(curve)
}

/// Exact minimum of the apparent-power curve: the source voltage at which
/// the load is served at unity power factor (`Q = 0`, `S = P_load`).
pub fn s_curve_minimum(params: &SubstationParams) -> SCurvePoint {
    let vl = params.v_l();
    let drop = params.p_load() * params.x() / vl;
    SCurvePoint {
        vs: (vl * vl + drop * drop).sqrt(),
        q: 0.0,
        s: params.p_load(),
    }
}

/// Load-bus voltage with no reactive compensation (`Q = 0` at the load):
/// the high-voltage root of `u^2 - vs^2 u + p^2 x^2 = 0`, `u = V_L^2`.
pub fn uncompensated_load_voltage(vs: f64, p: f64, x: f64) -> Result<f64> {
    let vs = positive("vs", vs)?;
    let p = non_negative("p", p)?;
    let x = positive("x", x)?;
    let vs2 = vs * vs;
    let px2 = 2.0 * p * x;
    let mut disc = (vs2 - px2) * (vs2 + px2);
    if disc < 0.0 {
        if disc < -ROUNDOFF * vs2 * vs2 {
            return Err(VrtError::VoltageCollapse { vs, p });
        }
        disc = 0.0;
    }
    Ok(((vs2 + disc.sqrt()) / 2.0).sqrt())
}
