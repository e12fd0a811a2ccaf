use std::collections::BTreeMap;
use std::path::PathBuf;

use mh_core::diagnostics::{AcceptanceRate, EfficiencyReport};

use crate::commands::{function_reports, KeptRows};
use crate::errors::{CliError, CliResult};
use crate::io::{read_trace_csv, write_acf_csv, write_json};
use crate::model::FunctionKind;

pub struct AnalyzeArgs {
    pub trace: PathBuf,
    pub out: PathBuf,
    pub k_max: Option<usize>,
    pub quiet: bool,
}

#[derive(serde::Serialize)]
struct AnalyzeSummary {
    command: &'static str,
    rows: usize,
    dimension: usize,
    acceptance: AcceptanceRate,
    functions: BTreeMap<String, Vec<EfficiencyReport>>,
}

/// Recomputes the full diagnostics of a trace CSV. Running this on a file
/// produced by `sample` reproduces the matching part of its summary JSON
/// exactly: the CSV round-trips every float bit-for-bit.
pub fn run(args: &AnalyzeArgs) -> CliResult<()> {
    let file = read_trace_csv(&args.trace)?;
    let rows = KeptRows::from_file(&file);
    let acceptance = rows.acceptance()?;
    let functions = function_reports(
        &rows,
        &[FunctionKind::Identity, FunctionKind::Squared],
        args.k_max,
    )?;
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::io("cannot create output dir", e))?;
    write_acf_csv(
        &args.out.join("acf.csv"),
        &functions[FunctionKind::Identity.label()],
    )?;
    let summary = AnalyzeSummary {
        command: "analyze",
        rows: rows.len(),
        dimension: rows.dimension,
        acceptance,
        functions,
    };
    write_json(&args.out.join("analysis.json"), &summary)?;
    if !args.quiet {
        eprintln!(
            "analyzed {} rows of dimension {}, empirical acceptance {:.4}",
            rows.len(),
            rows.dimension,
            acceptance.empirical_rate
        );
    }
    Ok(())
}
