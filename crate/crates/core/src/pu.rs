//! Receiving-end power-flow primitives for a lossless series reactance.
//!
//! With source voltage `|Vs|`, load voltage `|V_L|`, reactance `X` and power
//! angle `delta` (source leading load):
//!
//! ```text
//! P = |Vs| |V_L| sin(delta) / X
//! Q = |V_L| (|Vs| cos(delta) - |V_L|) / X
//! ```
//!
//! Eliminating `delta` gives the power circle
//! `P^2 + (Q + |V_L|^2 / X)^2 = (|Vs| |V_L| / X)^2`. Only the stable arc
//! `0 <= delta <= pi/2` is used.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, positive, Result, VrtError};

/// Relative slack allowed on square-root and arcsine arguments before an
/// operating point is declared infeasible. Covers rounding on the exact
/// delta = 90 deg boundary only.
pub(crate) const ROUNDOFF: f64 = 1e-12;

/// A load-side operating point on the stable arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub p: f64,
    pub q: f64,
    pub delta: f64,
    pub s: f64,
}

impl OperatingPoint {
    pub fn at(vs: f64, vl: f64, x: f64, delta: f64) -> Result<Self> {
        let (p, q) = receiving_end_pq(vs, vl, x, delta)?;
        Ok(Self {
            p,
            q,
            delta,
            s: apparent_power(p, q),
        })
    }
}

fn check_delta(delta: f64) -> Result<f64> {
    if delta.is_finite() && (0.0..=FRAC_PI_2).contains(&delta) {
        Ok(delta)
    } else {
        Err(VrtError::Domain {
            name: "delta",
            value: delta,
            expected: "within [0, pi/2] rad",
        })
    }
}

/// Load-side active and reactive power at power angle `delta`.
pub fn receiving_end_pq(vs: f64, vl: f64, x: f64, delta: f64) -> Result<(f64, f64)> {
    let vs = positive("vs", vs)?;
    let vl = positive("vl", vl)?;
    let x = positive("x", x)?;
    let delta = check_delta(delta)?;
    let (sin, cos) = delta.sin_cos();
    let p = vs * vl * sin / x;
    let q = vl * (vs * cos - vl) / x;
    Ok((p, q))
}

/// Stable power angle that transfers `p`, i.e. `asin(p X / (|Vs| |V_L|))`.
pub fn solve_delta(p: f64, vs: f64, vl: f64, x: f64) -> Result<f64> {
    let p = non_negative("p", p)?;
    let vs = positive("vs", vs)?;
    let vl = positive("vl", vl)?;
    let x = positive("x", x)?;
    let p_max = vs * vl / x;
    let ratio = p / p_max;
    if ratio > 1.0 + ROUNDOFF {
        return Err(VrtError::InfeasiblePower { p, p_max });
    }
    Ok(ratio.min(1.0).asin())
}

pub fn apparent_power(p: f64, q: f64) -> f64 {
    p.hypot(q)
}

/// Reactive power on the stable (upper) branch of the power circle for `|Vs|`
/// at active power `p`.
///
/// Evaluated as `(r^2 - c^2 - p^2) / (c + sqrt(r^2 - p^2))` with centre
/// offset `c = V_L^2 / X` and radius `r = |Vs| V_L / X`, which is the same
/// value as `-c + sqrt(r^2 - p^2)` without cancellation near `Q = 0`.
pub fn q_on_circle(vs: f64, vl: f64, x: f64, p: f64) -> Result<f64> {
    let vs = positive("vs", vs)?;
    let vl = positive("vl", vl)?;
    let x = positive("x", x)?;
    if !p.is_finite() {
        return Err(VrtError::Domain {
            name: "p",
            value: p,
            expected: "finite",
        });
    }
    let radius = vs * vl / x;
    let center = vl * vl / x;
    let radius_sq = radius * radius;
    let mut arg = radius_sq - p * p;
    if arg < 0.0 {
        if arg < -ROUNDOFF * radius_sq {
            return Err(VrtError::InfeasiblePower {
                p: p.abs(),
                p_max: radius,
            });
        }
        arg = 0.0;
    }
    let r2_minus_c2 = vl * vl * (vs - vl) * (vs + vl) / (x * x);
    Ok((r2_minus_c2 - p * p) / (center + arg.sqrt()))
}
