//! Trace CSV, autocorrelation CSV and JSON output.
//!
//! All numbers are written with Rust's shortest round-trip formatting, so
//! re-reading a file recovers exactly the in-memory values and repeated
//! runs with the same seed produce byte-identical files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use mh_core::chain::ChainTrace;
use mh_core::diagnostics::EfficiencyReport;

use crate::errors::{CliError, CliResult};

/// Writes trace rows `first_row..len` (0-based) as
/// `t,x_1,...,x_D,alpha,accepted` with 1-based `t`.
pub fn write_trace_csv(path: &Path, trace: &ChainTrace, first_row: usize) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io("cannot create trace file", e))?;
    let mut w = BufWriter::new(file);
    let mut header = String::from("t");
    for d in 1..=trace.dimension() {
        header.push_str(&format!(",x_{d}"));
    }
    header.push_str(",alpha,accepted");
    writeln!(w, "{header}").map_err(|e| CliError::io("trace write failed", e))?;
    for row in first_row..trace.len() {
        let mut line = format!("{}", row + 1);
        for v in trace.state(row) {
            line.push(',');
            line.push_str(&format!("{v}"));
        }
        line.push(',');
        line.push_str(&format!("{}", trace.alpha_at(row)));
        line.push(',');
        line.push(if trace.accepted_at(row) { '1' } else { '0' });
        writeln!(w, "{line}").map_err(|e| CliError::io("trace write failed", e))?;
    }
    w.flush().map_err(|e| CliError::io("trace write failed", e))
}

/// A trace read back from CSV.
pub struct TraceFile {
    pub dimension: usize,
    pub states: Vec<f64>, // rows x dimension
    pub alphas: Vec<f64>,
    pub accepted: Vec<bool>,
}

impl TraceFile {
    pub fn rows(&self) -> usize {
        self.alphas.len()
    }

    pub fn coordinate(&self, d: usize) -> Vec<f64> {
        (0..self.rows())
            .map(|r| self.states[r * self.dimension + d])
            .collect()
    }
}

pub fn read_trace_csv(path: &Path) -> CliResult<TraceFile> {
    let file = File::open(path).map_err(|e| CliError::io("cannot open trace file", e))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Runtime("trace file is empty".to_string()))?
        .map_err(|e| CliError::io("trace read failed", e))?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 4
        || columns[0] != "t"
        || columns[columns.len() - 2] != "alpha"
        || columns[columns.len() - 1] != "accepted"
    {
        return Err(CliError::Runtime(format!(
            "unexpected trace header {header:?}; expected t,x_1,...,alpha,accepted"
        )));
    }
    let dimension = columns.len() - 3;
    for (d, name) in columns[1..1 + dimension].iter().enumerate() {
        if *name != format!("x_{}", d + 1) {
            return Err(CliError::Runtime(format!(
                "unexpected trace column {name:?}, expected x_{}",
                d + 1
            )));
        }
    }
    let mut states = Vec::new();
    let mut alphas = Vec::new();
    let mut accepted = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line.map_err(|e| CliError::io("trace read failed", e))?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(CliError::Runtime(format!(
                "trace row {} has {} fields, expected {}",
                idx + 2,
                fields.len(),
                columns.len()
            )));
        }
        for f in &fields[1..1 + dimension] {
            states.push(parse_float(f, idx + 2)?);
        }
        alphas.push(parse_float(fields[dimension + 1], idx + 2)?);
        accepted.push(match fields[dimension + 2] {
            "1" => true,
            "0" => false,
            other => {
                return Err(CliError::Runtime(format!(
                    "trace row {}: accepted flag {other:?} is not 0/1",
                    idx + 2
                )))
            }
        });
    }
    if alphas.is_empty() {
        return Err(CliError::Runtime("trace file has no data rows".to_string()));
    }
    Ok(TraceFile {
        dimension,
        states,
        alphas,
        accepted,
    })
}

fn parse_float(field: &str, row: usize) -> CliResult<f64> {
    field
        .parse::<f64>()
        .map_err(|_| CliError::Runtime(format!("trace row {row}: cannot parse number {field:?}")))
}

/// Writes `k,rho_x1,...,rho_xD` using each report's autocorrelation array.
pub fn write_acf_csv(path: &Path, reports: &[EfficiencyReport]) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io("cannot create acf file", e))?;
    let mut w = BufWriter::new(file);
    let mut header = String::from("k");
    for d in 1..=reports.len() {
        header.push_str(&format!(",rho_x{d}"));
    }
    writeln!(w, "{header}").map_err(|e| CliError::io("acf write failed", e))?;
    let rows = reports.iter().map(|r| r.autocorrelations.len()).min().unwrap_or(0);
    for k in 0..rows {
        let mut line = format!("{k}");
        for r in reports {
            line.push(',');
            line.push_str(&format!("{}", r.autocorrelations[k]));
        }
        writeln!(w, "{line}").map_err(|e| CliError::io("acf write failed", e))?;
    }
    w.flush().map_err(|e| CliError::io("acf write failed", e))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Runtime(format!("json serialization failed: {e}")))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::io("json write failed", e))
}
