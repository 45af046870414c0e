//! Source-voltage trace files: CSV with a required `t_s,vs_pu` header.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use vrt_core::{DipTrace, VrtError};

use crate::error::{CliError, Result};

pub const HEADER: [&str; 2] = ["t_s", "vs_pu"];

pub fn read_trace(path: &Path) -> Result<DipTrace> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_trace(file, path)
}

/// Rows are numbered as lines in the file; the header is row 1.
pub fn parse_trace(reader: impl Read, path: &Path) -> Result<DipTrace> {
    let file_err = |message: String| CliError::TraceFile {
        path: path.to_path_buf(),
        message,
    };
    let row_err = |row: u64, message: String| CliError::Trace {
        path: path.to_path_buf(),
        row,
        message,
    };

    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| file_err(e.to_string()))?.clone();
    if header.iter().ne(HEADER) {
        return Err(row_err(
            1,
            format!(
                "expected header `t_s,vs_pu`, found `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut samples = Vec::new();
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line());
            row_err(row, e.to_string())
        })?;
        let row = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<f64> {
            let text = &record[i];
            text.parse::<f64>()
                .map_err(|_| row_err(row, format!("`{text}` is not a number ({})", HEADER[i])))
        };
        samples.push((field(0)?, field(1)?));
        rows.push(row);
    }
    if samples.is_empty() {
        return Err(file_err("no samples after the header".into()));
    }
    DipTrace::new(samples).map_err(|e| match e {
        VrtError::MalformedTrace { index, reason } => row_err(rows[index], reason),
        other => file_err(other.to_string()),
    })
}
