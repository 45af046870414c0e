//! CSV and JSON artifacts, plus readers for re-parsing them.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use vrt_core::{CircleLocus, Mode, RecordCase, SCurvePoint, SimRecord};

use crate::error::{CliError, Result};
use crate::number::g9;

pub const CIRCLES_HEADER: [&str; 4] = ["vs", "delta_deg", "p", "q"];
pub const SCURVE_HEADER: [&str; 3] = ["vs", "q", "s"];
pub const LOG_HEADER: [&str; 8] = [
    "t",
    "vs",
    "case",
    "vl_effective",
    "q_cmd",
    "p_vrt_cmd",
    "mode",
    "on_grid",
];

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

fn write_rows<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv_writer(std::io::BufWriter::new(file));
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Power-circle loci, one row per point; the angle column is in degrees.
pub fn write_circles(path: &Path, loci: &[CircleLocus]) -> Result<()> {
    let rows = loci.iter().flat_map(|locus| {
        let vs = locus.vs.unwrap_or(f64::NAN);
        locus
            .points
            .iter()
            .map(move |pt| vec![g9(vs), g9(pt.angle.to_degrees()), g9(pt.p), g9(pt.q)])
    });
    write_rows(path, &CIRCLES_HEADER, rows)
}

pub fn write_scurve(path: &Path, curve: &[SCurvePoint]) -> Result<()> {
    let rows = curve.iter().map(|pt| vec![g9(pt.vs), g9(pt.q), g9(pt.s)]);
    write_rows(path, &SCURVE_HEADER, rows)
}

pub fn write_log(path: &Path, log: &[SimRecord]) -> Result<()> {
    let rows = log.iter().map(|r| {
        vec![
            g9(r.t),
            g9(r.vs),
            r.case.as_str().to_string(),
            g9(r.vl_effective),
            g9(r.q_cmd),
            g9(r.p_vrt_cmd),
            r.mode.as_str().to_string(),
            r.on_grid.to_string(),
        ]
    });
    write_rows(path, &LOG_HEADER, rows)
}

fn read_table(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let bad = |row: u64, message: String| CliError::Artifact {
        path: path.to_path_buf(),
        row,
        message,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let found = rdr.headers().map_err(|e| csv_err(path, e))?;
    if found.iter().ne(header.iter().copied()) {
        return Err(bad(1, format!("unexpected header {found:?}")));
    }
    rdr.records()
        .map(|r| r.map_err(|e| bad(e.position().map_or(0, |p| p.line()), e.to_string())))
        .collect()
}

fn num(rec: &csv::StringRecord, i: usize, path: &Path) -> Result<f64> {
    rec[i].parse().map_err(|_| CliError::Artifact {
        path: path.to_path_buf(),
        row: rec.position().map_or(0, |p| p.line()),
        message: format!("`{}` is not a number", &rec[i]),
    })
}

/// Rows of a circles CSV as `(vs, delta_deg, p, q)`.
pub fn read_circles(path: &Path) -> Result<Vec<[f64; 4]>> {
    read_table(path, &CIRCLES_HEADER)?
        .iter()
        .map(|r| {
            Ok([
                num(r, 0, path)?,
                num(r, 1, path)?,
                num(r, 2, path)?,
                num(r, 3, path)?,
            ])
        })
        .collect()
}

pub fn read_scurve(path: &Path) -> Result<Vec<SCurvePoint>> {
    read_table(path, &SCURVE_HEADER)?
        .iter()
        .map(|r| {
            Ok(SCurvePoint {
                vs: num(r, 0, path)?,
                q: num(r, 1, path)?,
                s: num(r, 2, path)?,
            })
        })
        .collect()
}

pub fn parse_case(text: &str) -> Option<RecordCase> {
    [
        RecordCase::NoCompNeeded,
        RecordCase::QOnly,
        RecordCase::DualPQ,
        RecordCase::Infeasible,
    ]
    .into_iter()
    .find(|c| c.as_str() == text)
}

pub fn parse_mode(text: &str) -> Option<Mode> {
    [Mode::OnGrid, Mode::Emergency, Mode::ReconnectWait]
        .into_iter()
        .find(|m| m.as_str() == text)
}

pub fn read_log(path: &Path) -> Result<Vec<SimRecord>> {
    let bad = |rec: &csv::StringRecord, what: &str| CliError::Artifact {
        path: path.to_path_buf(),
        row: rec.position().map_or(0, |p| p.line()),
        message: format!("invalid {what}"),
    };
    read_table(path, &LOG_HEADER)?
        .iter()
        .map(|r| {
            Ok(SimRecord {
                t: num(r, 0, path)?,
                vs: num(r, 1, path)?,
                case: parse_case(&r[2]).ok_or_else(|| bad(r, "case"))?,
                vl_effective: num(r, 3, path)?,
                q_cmd: num(r, 4, path)?,
                p_vrt_cmd: num(r, 5, path)?,
                mode: parse_mode(&r[6]).ok_or_else(|| bad(r, "mode"))?,
                on_grid: r[7].parse().map_err(|_| bad(r, "on_grid"))?,
            })
        })
        .collect()
}
