//! Independent numeric oracles. Nothing here calls into `vrt_core`: every
//! routine works from the raw receiving-end equations by sweeping or
//! bisecting, so it can cross-check the closed forms in the library.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

/// Receiving-end P and Q, written out directly.
pub fn pq(vs: f64, vl: f64, x: f64, delta: f64) -> (f64, f64) {
    (vs * vl * delta.sin() / x, vl * (vs * delta.cos() - vl) / x)
}

/// Root of a monotone function on `[lo, hi]` by plain bisection.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    assert!(
        f_lo * f(hi) <= 0.0,
        "bisection bracket [{lo}, {hi}] does not straddle a root"
    );
    let rising = f_lo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Grid `delta_k = k h` over `[0, pi/2]`, with `pi/2` appended.
pub struct DeltaGrid {
    pub h: f64,
    n: usize,
}

impl DeltaGrid {
    pub fn new(h: f64) -> Self {
        let n = (FRAC_PI_2 / h).floor() as usize + 1;
        Self { h, n: n + 1 }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn at(&self, k: usize) -> f64 {
        if k + 1 == self.n {
            FRAC_PI_2
        } else {
            k as f64 * self.h
        }
    }
}

/// Grid point minimizing `|P(delta) - p|` by scanning every node.
pub fn delta_sweep_exhaustive(grid: &DeltaGrid, vs: f64, vl: f64, x: f64, p: f64) -> f64 {
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..grid.len() {
        let d = grid.at(k);
        let err = (pq(vs, vl, x, d).0 - p).abs();
        if err < best.0 {
            best = (err, d);
        }
    }
    best.1
}

/// Same node as [`delta_sweep_exhaustive`], located by bisection on the node
/// index. Valid because P is non-decreasing in delta on `[0, pi/2]`.
pub fn delta_sweep_bisect(grid: &DeltaGrid, vs: f64, vl: f64, x: f64, p: f64) -> f64 {
    let p_at = |k: usize| pq(vs, vl, x, grid.at(k)).0;
    let (mut lo, mut hi) = (0usize, grid.len() - 1);
    if p_at(hi) <= p {
        return grid.at(hi);
    }
    if p_at(lo) >= p {
        return grid.at(lo);
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if p_at(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (p_at(lo) - p).abs() <= (p_at(hi) - p).abs() {
        grid.at(lo)
    } else {
        grid.at(hi)
    }
}

/// Q on the stable arc at active power `p` via a delta sweep, with the
/// tolerance the grid spacing implies: the chosen node is within one step
/// `h` of the true angle and `|dQ/d delta| <= r`, so `|dQ| <= r h`.
pub fn q_by_sweep(grid: &DeltaGrid, vs: f64, vl: f64, x: f64, p: f64) -> (f64, f64) {
    let d = delta_sweep_bisect(grid, vs, vl, x, p);
    let r = vs * vl / x;
    (pq(vs, vl, x, d).1, r * grid.h + 1e-12)
}

/// Angle on the stable arc that carries `p`, by bisection on P(delta).
pub fn delta_for_p(vs: f64, vl: f64, x: f64, p: f64) -> f64 {
    bisect(|d| pq(vs, vl, x, d).0 - p, 0.0, FRAC_PI_2)
}

/// Q where the stable arc of the power circle meets `|S| = s_max`, found by
/// bisecting `|S|` along the arc (it grows monotonically from delta = 0).
pub fn arc_s_crossing(vs: f64, vl: f64, x: f64, s_max: f64) -> (f64, f64) {
    let s_at = |d: f64| {
        let (p, q) = pq(vs, vl, x, d);
        p.hypot(q) - s_max
    };
    let d = bisect(s_at, 0.0, FRAC_PI_2);
    pq(vs, vl, x, d)
}

/// Smallest `|S|` over a sampled stable arc.
pub fn arc_min_s(vs: f64, vl: f64, x: f64, samples: usize) -> f64 {
    (0..=samples)
        .map(|i| {
            let (p, q) = pq(vs, vl, x, FRAC_PI_2 * i as f64 / samples as f64);
            p.hypot(q)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Source voltage at which the whole arc just touches the S_max circle.
pub fn vs_min_by_tangency(x: f64, s_max: f64, vl: f64) -> f64 {
    bisect(|vs| arc_min_s(vs, vl, x, 2000) - s_max, 1e-6, vl)
}

/// Source voltage at which holding `p_load` needs exactly `s_max`.
pub fn vs_m_by_bisection(x: f64, s_max: f64, vl: f64, p_load: f64) -> f64 {
    let s_needed = |vs: f64| {
        let (p, q) = pq(vs, vl, x, delta_for_p(vs, vl, x, p_load));
        p.hypot(q) - s_max
    };
    let vs_floor = p_load * x / vl * (1.0 + 1e-12);
    // unity power factor point: the S curve's minimum
    let vs_upf = (vl * vl + (p_load * x / vl).powi(2)).sqrt();
    bisect(s_needed, vs_floor, vs_upf)
}

/// High-voltage load-bus solution with Q = 0: cos(delta) = vl / vs and
/// `vl sqrt(vs^2 - vl^2) / x = p`, bisected on the upper half of the nose.
pub fn uncompensated_by_bisection(vs: f64, p: f64, x: f64) -> f64 {
    bisect(
        |vl| vl * (vs * vs - vl * vl).max(0.0).sqrt() / x - p,
        vs / 2f64.sqrt(),
        vs,
    )
}

/// Deterministic uniform draws for sweeps.
pub struct Draws(TestRunner);

impl Draws {
    pub fn new() -> Self {
        Self(TestRunner::deterministic())
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (lo..hi)
            .new_tree(&mut self.0)
            .expect("range strategy")
            .current()
    }
}
