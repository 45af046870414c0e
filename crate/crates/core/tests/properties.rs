mod common;

use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use vrt_core::dispatch::{vs_m_threshold, vs_min_threshold};
use vrt_core::*;

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

prop_compose! {
    fn any_params()(x in 0.01..0.9f64, vl in 0.5..1.5f64, s_frac in 0.05..0.999f64, p_frac in 0.0..=1.0f64)
        -> SubstationParams
    {
        // s_max scaled so x * s_max < vl^2 always holds
        let s_max = s_frac * vl * vl / x;
        SubstationParams::new(x, s_max, vl, p_frac * s_max).unwrap()
    }
}

prop_compose! {
    fn loaded_params()(params in any_params(), p_frac in 0.01..0.99f64) -> SubstationParams {
        params.with_p_load(p_frac * params.s_max()).unwrap()
    }
}

proptest! {
    #[test]
    fn circle_identity(vs in 0.05..2.0f64, vl in 0.5..1.5f64, x in 0.01..1.0f64, delta in 0.0..=FRAC_PI_2) {
        let (p, q) = receiving_end_pq(vs, vl, x, delta).unwrap();
        let lhs = p * p + (q + vl * vl / x).powi(2);
        let rhs = (vs * vl / x).powi(2);
        prop_assert!(rel_close(lhs, rhs, 1e-9));
    }

    #[test]
    fn q_on_circle_round_trip(vs in 0.05..2.0f64, vl in 0.5..1.5f64, x in 0.01..1.0f64, delta in 0.0..=FRAC_PI_2) {
        let (p, q) = receiving_end_pq(vs, vl, x, delta).unwrap();
        let q_back = q_on_circle(vs, vl, x, p).unwrap();
        // scale: Q spans the circle's diameter
        prop_assert!((q_back - q).abs() <= 1e-9 * (vs * vl / x).max(1.0), "{q_back} vs {q}");
    }

    #[test]
    fn solve_delta_inverts_p(vs in 0.05..2.0f64, vl in 0.5..1.5f64, x in 0.01..1.0f64, delta in 0.0..1.55f64) {
        let (p, _) = receiving_end_pq(vs, vl, x, delta).unwrap();
        let back = solve_delta(p, vs, vl, x).unwrap();
        prop_assert!((back - delta).abs() <= 1e-9);
    }

    #[test]
    fn q_on_circle_increases_with_vs(vl in 0.5..1.5f64, x in 0.01..1.0f64, p in 0.0..3.0f64, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let floor = p * x / vl;
        let lo = floor + 0.01 + a.min(b) * 2.0;
        let hi = floor + 0.01 + a.max(b) * 2.0 + 1e-6;
        prop_assert!(q_on_circle(lo, vl, x, p).unwrap() < q_on_circle(hi, vl, x, p).unwrap());
    }

    #[test]
    fn locus_points_on_circle(params in any_params(), vs in 0.05..2.0f64, n in 2usize..200) {
        let fam = circle_family(&params, &[vs], n).unwrap();
        let c = circle_of(vs, params.v_l(), params.x()).unwrap();
        prop_assert_eq!(fam[0].points.len(), n);
        prop_assert_eq!(fam[0].points[0].p, 0.0);
        for pt in &fam[0].points {
            prop_assert!(c.relative_residual(pt.p, pt.q).abs() <= 1e-9);
        }
    }

    #[test]
    fn intersection_lies_on_both_circles(params in loaded_params(), t in 0.001..0.999f64) {
        let th = thresholds(&params);
        let vs = th.vs_min + t * (th.vs_m - th.vs_min);
        let c = circle_of(vs, params.v_l(), params.x()).unwrap();
        let q_i = q_intersection(vs, &params);
        let p_i = (c.radius.powi(2) - (q_i - c.center_q).powi(2)).sqrt();
        prop_assert!((p_i.hypot(q_i) - params.s_max()).abs() <= 1e-9 * params.s_max().max(1.0));
        let q_axis = q_axis_crossing(vs, params.v_l(), params.x());
        prop_assert!(q_axis.abs() <= q_i.abs());
    }

    #[test]
    fn uncompensated_never_exceeds_source(vs in 0.05..2.0f64, p in 0.0..3.0f64, x in 0.01..1.0f64) {
        if let Ok(vl) = uncompensated_load_voltage(vs, p, x) {
            prop_assert!(vl <= vs);
        }
    }

    #[test]
    fn thresholds_order_exactly_when_reactance_small(params in loaded_params()) {
        let th = thresholds(&params);
        prop_assert!(th.vs_theory > 0.0);
        prop_assert!(th.vs_min < th.vs_m);
        prop_assert!(th.vs_theory <= th.vs_m);
        let small = params.x() * (params.p_load() + params.s_max()) < params.v_l().powi(2);
        // exact equivalence up to rounding right at the boundary
        let margin = (params.x() * (params.p_load() + params.s_max()) - params.v_l().powi(2)).abs();
        if margin > 1e-12 {
            prop_assert_eq!(th.vs_theory < th.vs_min, small);
        }
    }

    #[test]
    fn case2_band_stays_inside_s_max(params in loaded_params(), t in 0.0..1.0f64, f in 0.0..=1.0f64) {
        let th = thresholds(&params);
        let policy = DispatchPolicy::with_fraction(f).unwrap();
        let vs = th.vs_min + (0.001 + 0.998 * t) * (th.vs_m - th.vs_min);
        let d = dispatch_case2(vs, &params, &policy).unwrap();
        prop_assert!(d.s_grid <= params.s_max() + 1e-9);
        prop_assert_eq!(d.p_grid + d.p_vrt, params.p_load());
        prop_assert!(d.p_vrt >= 0.0);
        let c = circle_of(vs, params.v_l(), params.x()).unwrap();
        prop_assert!(c.relative_residual(d.p_grid, d.q_total).abs() <= 1e-9);
    }

    #[test]
    fn case1_membership_and_limit(params in loaded_params(), t in 0.0..=1.0f64) {
        let th = thresholds(&params);
        // upper crossing of the load line with the S_max circle
        let q_up = (params.s_max().powi(2) - params.p_load().powi(2)).sqrt();
        let vl = params.v_l();
        let x = params.x();
        let vs_up = x / vl * params.p_load().hypot(vl * vl / x + q_up);
        let vs = th.vs_m + t * (vs_up - th.vs_m);
        let d = dispatch_case1(vs, &params).unwrap();
        prop_assert!(d.s_grid <= params.s_max() * (1.0 + 1e-9));
        prop_assert_eq!(d.p_grid + d.p_vrt, params.p_load());
        let c = circle_of(vs, vl, x).unwrap();
        prop_assert!(c.relative_residual(d.p_grid, d.q_total).abs() <= 1e-9);
    }

    #[test]
    fn p_vrt_non_increasing_in_vs(params in loaded_params(), a in 0.0..1.0f64, b in 0.0..1.0f64, f in 0.0..=1.0f64) {
        let th = thresholds(&params);
        let policy = DispatchPolicy::with_fraction(f).unwrap();
        let at = |t: f64| th.vs_min + (0.001 + 0.998 * t) * (th.vs_m - th.vs_min);
        let lo = dispatch_case2(at(a.min(b)), &params, &policy).unwrap();
        let hi = dispatch_case2(at(a.max(b)), &params, &policy).unwrap();
        prop_assert!(hi.p_vrt <= lo.p_vrt + 1e-12);
    }

    #[test]
    fn boundary_continuity_at_vs_m(params in loaded_params()) {
        let vs_m = vs_m_threshold(&params).unwrap();
        let d1 = dispatch_case1(vs_m, &params).unwrap();
        prop_assert!((d1.s_grid - params.s_max()).abs() <= 1e-6);
        let full = DispatchPolicy::with_fraction(1.0).unwrap();
        let below = vs_m - 1e-7 * (vs_m - vs_min_threshold(&params));
        let d2 = dispatch_case2(below, &params, &full).unwrap();
        prop_assert!(d2.p_vrt <= 1e-4 * params.p_load().max(1.0));
    }

    #[test]
    fn s_curve_unimodal(params in loaded_params(), n in 50usize..400) {
        let th = thresholds(&params);
        let min = s_curve_minimum(&params);
        let curve = s_curve(&params, th.vs_theory * 0.5, min.vs * 2.0, n).unwrap();
        prop_assert!(curve.iter().all(|pt| pt.vs >= th.vs_theory * (1.0 - 1e-12)));
        for w in curve.windows(2) {
            if w[1].vs <= min.vs {
                prop_assert!(w[1].s < w[0].s);
            } else if w[0].vs >= min.vs {
                prop_assert!(w[1].s > w[0].s);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_forms_agree_with_sweeps(params in loaded_params(), t in 0.01..0.99f64) {
        let (x, s, vl, p) = (params.x(), params.s_max(), params.v_l(), params.p_load());
        let th = thresholds(&params);
        let vs_m = common::vs_m_by_bisection(x, s, vl, p);
        prop_assert!((th.vs_m - vs_m).abs() <= 1e-9 * vs_m.max(1.0));

        let vs = th.vs_min + t * (th.vs_m - th.vs_min);
        let (_, q_arc) = common::arc_s_crossing(vs, vl, x, s);
        let q_i = q_intersection(vs, &params);
        prop_assert!((q_i - q_arc).abs() <= 1e-9 * (vs * vl / x).max(1.0));

        let grid = common::DeltaGrid::new(1e-5);
        let vs_hi = th.vs_m * (1.0 + t);
        let (q_sweep, tol) = common::q_by_sweep(&grid, vs_hi, vl, x, p);
        prop_assert!((q_on_circle(vs_hi, vl, x, p).unwrap() - q_sweep).abs() <= tol);
    }
}

fn sim_params() -> SubstationParams {
    SubstationParams::default()
}

prop_compose! {
    /// Piecewise-constant traces on a 1 ms grid with a handful of dips.
    fn dip_trace()(levels in prop::collection::vec((0.0..1.2f64, 1usize..400), 1..8)) -> DipTrace {
        let mut samples = Vec::new();
        let mut i = 0usize;
        for (vs, len) in levels {
            for _ in 0..len {
                samples.push((i as f64 * 1e-3, vs));
                i += 1;
            }
        }
        DipTrace::new(samples).unwrap()
    }
}

fn fast_ups(reconnect_delay: f64) -> UpsConfig {
    UpsConfig::new(0.85, 1.15, 0.02, 0.9, reconnect_delay).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn simulation_is_deterministic(trace in dip_trace(), comp in any::<bool>()) {
        let params = sim_params();
        let ups = fast_ups(0.05);
        let policy = DispatchPolicy::default();
        let a = run(&trace, &params, &ups, &policy, comp);
        let b = run(&trace, &params, &ups, &policy, comp);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(summarize(&a).unwrap(), summarize(&b).unwrap());
    }

    #[test]
    fn ride_through_keeps_load_on_grid(levels in prop::collection::vec(0.0..1.0f64, 1..50)) {
        let params = sim_params();
        let th = thresholds(&params);
        let samples: Vec<_> = levels
            .iter()
            .enumerate()
            .map(|(i, f)| (i as f64 * 1e-3, th.vs_min + 1e-6 + f * (1.2 - th.vs_min)))
            .collect();
        let trace = DipTrace::new(samples).unwrap();
        let log = run(&trace, &params, &UpsConfig::default(), &DispatchPolicy::default(), true);
        prop_assert!(log.iter().all(|r| r.on_grid && r.vl_effective == params.v_l()));
    }

    #[test]
    fn hysteresis_and_mode_consistency(trace in dip_trace(), comp in any::<bool>(), delay in 0.0..0.2f64) {
        let params = sim_params();
        let ups = fast_ups(delay);
        let log = run(&trace, &params, &ups, &DispatchPolicy::default(), comp);
        let mut wait_start: Option<f64> = None;
        for w in log.windows(2) {
            let (prev, cur) = (&w[0], &w[1]);
            prop_assert_eq!(cur.on_grid, cur.mode == Mode::OnGrid);
            if !cur.on_grid {
                prop_assert_eq!((cur.q_cmd, cur.p_vrt_cmd), (0.0, 0.0));
            }
            prop_assert!(!(prev.mode == Mode::Emergency && cur.mode == Mode::OnGrid));
            if cur.mode == Mode::ReconnectWait && prev.mode != Mode::ReconnectWait {
                wait_start = Some(cur.t);
            }
            if prev.mode == Mode::ReconnectWait && cur.mode == Mode::OnGrid {
                let held = cur.t - wait_start.unwrap();
                prop_assert!(held + 1e-9 >= ups.reconnect_delay, "reconnected after {held}");
            }
        }
    }

    #[test]
    fn transfer_needs_a_sustained_excursion(trace in dip_trace(), comp in any::<bool>()) {
        let params = sim_params();
        let ups = fast_ups(0.05);
        let log = run(&trace, &params, &ups, &DispatchPolicy::default(), comp);
        let mut state = SimState::default();
        for (&sample, rec) in trace.samples().iter().zip(&log) {
            let (next, again) = step(&state, sample, &params, &ups, &DispatchPolicy::default(), comp);
            prop_assert_eq!(&again, rec);
            if next.mode == Mode::OnGrid && !next.condition_held {
                prop_assert_eq!(next.window_timer, 0.0);
            }
            prop_assert!(next.window_timer >= 0.0);
            if next.mode != state.mode {
                prop_assert_eq!(next.window_timer, 0.0);
            }
            state = next;
        }
    }
}
