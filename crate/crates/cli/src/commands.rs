//! Subcommand implementations. Each returns what to print plus an optional
//! advisory; the binary maps the result onto an exit code.

use std::collections::HashSet;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use vrt_core::{
    circle_family, dispatch, run, s_curve, s_curve_minimum, s_max_circle, summarize, thresholds,
    Case, DispatchDecision, DispatchPolicy, SimSummary, SubstationParams, Thresholds,
};

use crate::args::{Cli, Command};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output;
use crate::report::{Evaluated, Provenance, Report};
use crate::style::Painter;
use crate::svg::{Frame, Plot};
use crate::trace::read_trace;

#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    /// Valid inputs with no feasible answer; reported with a distinct exit code.
    pub advisory: Option<String>,
    pub files: Vec<PathBuf>,
}

pub fn execute(cli: &Cli, paint: Painter) -> Result<Outcome> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    match &cli.command {
        Command::Thresholds => cmd_thresholds(&config, cli.json, paint),
        Command::Dispatch { vs, fraction } => cmd_dispatch(&config, vs, *fraction, cli.json, paint),
        Command::Circles { vs_list, points } => cmd_circles(&config, vs_list, *points, cli.json),
        Command::Scurve { vs_lo, vs_hi, n } => cmd_scurve(&config, *vs_lo, *vs_hi, *n, cli.json),
        Command::Simulate {
            traces,
            no_compensation,
        } => cmd_simulate(&config, traces, !no_compensation, cli.json, paint),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn params_line(p: &SubstationParams) -> String {
    format!(
        "X = {} pu, S_max = {} pu, V_L = {} pu, P_load = {} pu",
        p.x(),
        p.s_max(),
        p.v_l(),
        p.p_load()
    )
}

fn thresholds_table(th: &Thresholds) -> String {
    format!(
        "  vs_theory {:>10.6}  lowest source voltage that can carry P_load\n  \
         vs_min    {:>10.6}  at or below: no P/Q mix within S_max holds V_L\n  \
         vs_m      {:>10.6}  at or above: reactive power alone suffices\n",
        th.vs_theory, th.vs_min, th.vs_m
    )
}

pub fn cmd_thresholds(config: &RunConfig, json: bool, paint: Painter) -> Result<Outcome> {
    let report = Report {
        thresholds: thresholds(&config.substation),
        decisions: Vec::new(),
        provenance: Provenance::new("thresholds", config, config.policy),
    };
    let dir = config.prepare_output_dir()?;
    let path = dir.join("thresholds.json");
    output::write_json(&path, &report)?;
    let stdout = if json {
        to_json(&report)
    } else {
        format!(
            "{}\n{}",
            paint.bold(&format!("Thresholds ({})", params_line(&config.substation))),
            thresholds_table(&report.thresholds)
        )
    };
    Ok(Outcome {
        stdout,
        advisory: None,
        files: vec![path],
    })
}

fn case_label(case: Case, paint: Painter) -> String {
    match case {
        Case::QOnly => paint.good("Case 1: reactive power only"),
        Case::DualPQ => paint.warn("Case 2: dual active and reactive power"),
        Case::Infeasible => paint.bad("Case 3: infeasible, disconnect"),
    }
}

fn decision_table(vs: f64, d: &DispatchDecision, paint: Painter) -> String {
    let mut s = format!("vs = {vs} pu  {}\n", case_label(d.case, paint));
    if d.case != Case::Infeasible {
        let _ = write!(
            s,
            "  Q total      {:>10.6} pu (negative = capacitive)\n  \
             P grid       {:>10.6} pu\n  \
             P non-grid   {:>10.6} pu\n  \
             S grid       {:>10.6} pu\n  \
             S non-grid   {:>10.6} pu\n  \
             delta        {:>10.4} deg\n",
            d.q_total,
            d.p_grid,
            d.p_vrt,
            d.s_grid,
            d.s_nongrid,
            d.delta.to_degrees()
        );
    }
    s
}

pub fn cmd_dispatch(
    config: &RunConfig,
    vs_list: &[f64],
    fraction: Option<f64>,
    json: bool,
    paint: Painter,
) -> Result<Outcome> {
    let policy = match fraction {
        Some(f) => DispatchPolicy::new(f, config.policy.epsilon())
            .map_err(|e| CliError::Usage(format!("--fraction: {e}")))?,
        None => config.policy,
    };
    if let Some(&bad) = vs_list.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(CliError::Usage(format!("--vs must be > 0, got {bad}")));
    }
    let params = &config.substation;
    let decisions = vs_list
        .iter()
        .map(|&vs| {
            Ok(Evaluated {
                vs,
                decision: dispatch(vs, params, &policy)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = Report {
        thresholds: thresholds(params),
        decisions,
        provenance: Provenance::new("dispatch", config, policy),
    };
    let dir = config.prepare_output_dir()?;
    let path = dir.join("dispatch.json");
    output::write_json(&path, &report)?;

    let infeasible: Vec<String> = report
        .decisions
        .iter()
        .filter(|e| e.decision.case == Case::Infeasible)
        .map(|e| e.vs.to_string())
        .collect();
    let advisory = (!infeasible.is_empty()).then(|| {
        format!(
            "advisory: vs = {} pu is at or below vs_min = {:.6} pu; no active/reactive \
             combination within S_max holds the load voltage, so the load should disconnect",
            infeasible.join(", "),
            report.thresholds.vs_min
        )
    });

    let stdout = if json {
        to_json(&report)
    } else {
        let mut s = format!(
            "{}\n{}\n",
            paint.bold(&format!("Dispatch ({})", params_line(params))),
            thresholds_table(&report.thresholds)
        );
        for e in &report.decisions {
            s.push_str(&decision_table(e.vs, &e.decision, paint));
        }
        s
    };
    Ok(Outcome {
        stdout,
        advisory,
        files: vec![path],
    })
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn bounds(points: impl Iterator<Item = (f64, f64)>) -> ((f64, f64), (f64, f64)) {
    points.fold(
        (
            (f64::INFINITY, f64::NEG_INFINITY),
            (f64::INFINITY, f64::NEG_INFINITY),
        ),
        |((x0, x1), (y0, y1)), (x, y)| ((x0.min(x), x1.max(x)), (y0.min(y), y1.max(y))),
    )
}

fn padded((lo, hi): (f64, f64)) -> (f64, f64) {
    let pad = 0.04 * (hi - lo).max(1e-6);
    (lo - pad, hi + pad)
}

pub fn circles_svg(
    params: &SubstationParams,
    loci: &[vrt_core::CircleLocus],
    s_circle: &vrt_core::CircleLocus,
) -> String {
    let c = params.v_l() * params.v_l() / params.x();
    let p_load = params.p_load();
    let all = loci
        .iter()
        .chain(std::iter::once(s_circle))
        .flat_map(|l| l.points.iter().map(|pt| (pt.p, pt.q)))
        .chain([(p_load, 0.0), (0.0, -c)]);
    let (xr, yr) = bounds(all);
    let frame = Frame::new(padded((xr.0.min(0.0), xr.1)), padded(yr), true);
    let mut plot = Plot::new(
        frame,
        "Load-side power circles at constant load voltage",
        "P (pu)",
        "Q (pu, negative = capacitive)",
    );
    let (_, x_hi) = plot.frame().x_range();
    let (y_lo, y_hi) = plot.frame().y_range();

    let pts =
        |l: &vrt_core::CircleLocus| l.points.iter().map(|pt| (pt.p, pt.q)).collect::<Vec<_>>();
    plot.path(&pts(s_circle), "#d62728", "s-max", Some("6 4"));
    plot.text(
        (0.0, params.s_max()),
        &format!("S_max = {}", params.s_max()),
        "#d62728",
    );
    for (i, locus) in loci.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        plot.path(&pts(locus), color, "locus", None);
        if let (Some(vs), Some(first)) = (locus.vs, locus.points.first()) {
            plot.text((first.p, first.q), &format!("vs = {vs}"), color);
        }
    }
    plot.line((0.0, -c), (x_hi, -c), "#555", Some("2 3"));
    plot.text((x_hi * 0.8, -c), "delta = 90 deg", "#555");
    plot.line((p_load, y_lo), (p_load, y_hi), "#ff7f0e", Some("8 3"));
    plot.text(
        (p_load, y_hi - 0.05 * (y_hi - y_lo)),
        &format!("P_load = {p_load}"),
        "#ff7f0e",
    );
    plot.finish()
}

pub fn cmd_circles(
    config: &RunConfig,
    vs_list: &[f64],
    points: usize,
    json: bool,
) -> Result<Outcome> {
    if vs_list.is_empty() {
        return Err(CliError::Usage("--vs-list is empty".into()));
    }
    let params = &config.substation;
    let loci = circle_family(params, vs_list, points)?;
    let s_circle = s_max_circle(params.s_max(), 181)?;
    let dir = config.prepare_output_dir()?;
    let csv_path = dir.join("circles.csv");
    let svg_path = dir.join("circles.svg");
    output::write_circles(&csv_path, &loci)?;
    output::write_text(&svg_path, &circles_svg(params, &loci, &s_circle))?;

    let stdout = if json {
        to_json(&serde_json::json!({ "loci": loci, "s_max_circle": s_circle }))
    } else {
        format!(
            "{} power-circle loci ({} points each), S_max circle radius {} pu\nwrote {}\nwrote {}\n",
            loci.len(),
            points,
            params.s_max(),
            csv_path.display(),
            svg_path.display()
        )
    };
    Ok(Outcome {
        stdout,
        advisory: None,
        files: vec![csv_path, svg_path],
    })
}

pub fn scurve_svg(
    params: &SubstationParams,
    curve: &[vrt_core::SCurvePoint],
    vs_range: (f64, f64),
) -> String {
    let th = thresholds(params);
    let s_hi = curve.iter().map(|pt| pt.s).fold(params.s_max(), f64::max);
    let frame = Frame::new(vs_range, (0.0, s_hi * 1.05), false);
    let mut plot = Plot::new(
        frame,
        "Apparent power at the load holding V_L at constant P_load",
        "|Vs| (pu)",
        "S (pu)",
    );
    let pts: Vec<(f64, f64)> = curve.iter().map(|pt| (pt.vs, pt.s)).collect();
    plot.path(&pts, "#1f77b4", "s-curve", None);
    plot.line(
        (vs_range.0, params.s_max()),
        (vs_range.1, params.s_max()),
        "#d62728",
        Some("6 4"),
    );
    plot.text(
        (vs_range.0, params.s_max()),
        &format!("S_max = {}", params.s_max()),
        "#d62728",
    );
    if (vs_range.0..=vs_range.1).contains(&th.vs_theory) {
        plot.line(
            (th.vs_theory, 0.0),
            (th.vs_theory, s_hi * 1.05),
            "#555",
            Some("2 3"),
        );
        plot.text(
            (th.vs_theory, s_hi * 0.95),
            &format!("cutoff vs = {:.4}", th.vs_theory),
            "#555",
        );
    }
    let min = s_curve_minimum(params);
    if (vs_range.0..=vs_range.1).contains(&min.vs) {
        plot.text(
            (min.vs, min.s),
            &format!("min S = {:.4} at vs = {:.4}", min.s, min.vs),
            "#1f77b4",
        );
    }
    plot.finish()
}

pub fn cmd_scurve(
    config: &RunConfig,
    vs_lo: f64,
    vs_hi: f64,
    n: usize,
    json: bool,
) -> Result<Outcome> {
    let params = &config.substation;
    let curve = s_curve(params, vs_lo, vs_hi, n)?;
    let dir = config.prepare_output_dir()?;
    let csv_path = dir.join("scurve.csv");
    let svg_path = dir.join("scurve.svg");
    output::write_scurve(&csv_path, &curve)?;
    output::write_text(&svg_path, &scurve_svg(params, &curve, (vs_lo, vs_hi)))?;

    let th = thresholds(params);
    let min = s_curve_minimum(params);
    let stdout = if json {
        to_json(&serde_json::json!({ "curve": curve, "cutoff_vs": th.vs_theory, "minimum": min }))
    } else {
        format!(
            "{} of {n} samples feasible; cutoff at vs = {:.6} pu; minimum S = {:.6} pu at vs = {:.6} pu\nwrote {}\nwrote {}\n",
            curve.len(),
            th.vs_theory,
            min.s,
            min.vs,
            csv_path.display(),
            svg_path.display()
        )
    };
    Ok(Outcome {
        stdout,
        advisory: None,
        files: vec![csv_path, svg_path],
    })
}

fn stem_of(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_string)
        .ok_or_else(|| CliError::Usage(format!("cannot name outputs for trace {}", path.display())))
}

#[derive(Debug, serde::Serialize)]
struct TraceResult {
    trace: String,
    summary: SimSummary,
}

fn simulate_one(
    config: &RunConfig,
    dir: &Path,
    trace_path: &Path,
    stem: &str,
    compensation: bool,
) -> Result<(SimSummary, [PathBuf; 2])> {
    let trace = read_trace(trace_path)?;
    let log = run(
        &trace,
        &config.substation,
        &config.ups,
        &config.policy,
        compensation,
    );
    let summary = summarize(&log)?;
    let log_path = dir.join(format!("{stem}_log.csv"));
    let summary_path = dir.join(format!("{stem}_summary.json"));
    output::write_log(&log_path, &log)?;
    output::write_json(&summary_path, &summary)?;
    Ok((summary, [log_path, summary_path]))
}

pub fn cmd_simulate(
    config: &RunConfig,
    traces: &[PathBuf],
    compensation: bool,
    json: bool,
    paint: Painter,
) -> Result<Outcome> {
    let stems = traces
        .iter()
        .map(|p| stem_of(p))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = HashSet::new();
    if let Some(dup) = stems.iter().find(|s| !seen.insert(s.as_str())) {
        return Err(CliError::Usage(format!(
            "two traces share the output name `{dup}`"
        )));
    }
    let dir = config.prepare_output_dir()?;

    // independent and deterministic; results are kept in argument order
    let results: Vec<Result<(SimSummary, [PathBuf; 2])>> = std::thread::scope(|scope| {
        let handles: Vec<_> = traces
            .iter()
            .zip(&stems)
            .map(|(path, stem)| {
                scope.spawn(move || simulate_one(config, dir, path, stem, compensation))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    });

    let mut out = Vec::new();
    let mut files = Vec::new();
    for (stem, result) in stems.into_iter().zip(results) {
        let (summary, written) = result?;
        files.extend(written);
        out.push(TraceResult {
            trace: stem,
            summary,
        });
    }

    let stdout = if json {
        to_json(&out)
    } else {
        let mut s = String::new();
        for r in &out {
            let m = &r.summary;
            let status = if m.disconnect_count == 0 {
                paint.good("rode through")
            } else {
                paint.bad(&format!("{} disconnect(s)", m.disconnect_count))
            };
            let _ = write!(
                s,
                "{} [{}]  {status}\n  time off grid     {:>10.4} s\n  deepest vs        {:>10.4} pu\n  \
                 max |Q|           {:>10.4} pu\n  max P non-grid    {:>10.4} pu\n  non-grid energy   {:>10.6} pu*s\n",
                paint.bold(&r.trace),
                if compensation { "compensated" } else { "uncompensated" },
                m.time_off_grid,
                m.deepest_vs,
                m.max_abs_q,
                m.max_p_vrt,
                m.nongrid_energy
            );
        }
        for f in &files {
            let _ = writeln!(s, "wrote {}", f.display());
        }
        s
    };
    Ok(Outcome {
        stdout,
        advisory: None,
        files,
    })
}
