pub mod analyze;
pub mod anneal;
pub mod discrete;
pub mod sample;
pub mod sweep;

use std::collections::BTreeMap;

use mh_core::chain::ChainTrace;
use mh_core::diagnostics::{
    acceptance_rate_from_parts, AcceptanceRate, EfficiencyReport, ScalarSeries,
};

use crate::errors::{CliError, CliResult};
use crate::io::TraceFile;
use crate::model::FunctionKind;

/// The rows diagnostics run on: everything the trace file keeps.
pub(crate) struct KeptRows {
    pub dimension: usize,
    pub coordinates: Vec<Vec<f64>>,
    pub alphas: Vec<f64>,
    pub accepted: Vec<bool>,
}

impl KeptRows {
    pub fn from_trace(trace: &ChainTrace, first_row: usize) -> Self {
        let coordinates = (0..trace.dimension())
            .map(|d| trace.coordinate(d)[first_row..].to_vec())
            .collect();
        Self {
            dimension: trace.dimension(),
            coordinates,
            alphas: trace.alpha_values()[first_row..].to_vec(),
            accepted: trace.accepted_flags()[first_row..].to_vec(),
        }
    }

    pub fn from_file(file: &TraceFile) -> Self {
        Self {
            dimension: file.dimension,
            coordinates: (0..file.dimension).map(|d| file.coordinate(d)).collect(),
            alphas: file.alphas.clone(),
            accepted: file.accepted.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn acceptance(&self) -> CliResult<AcceptanceRate> {
        acceptance_rate_from_parts(&self.alphas, &self.accepted).map_err(CliError::from_run)
    }
}

pub(crate) fn function_series(
    rows: &KeptRows,
    function: FunctionKind,
    coordinate: usize,
) -> CliResult<ScalarSeries> {
    let values: Vec<f64> = rows.coordinates[coordinate]
        .iter()
        .map(|v| function.apply(*v))
        .collect();
    let label = match function {
        FunctionKind::Identity => format!("x_{}", coordinate + 1),
        FunctionKind::Squared => format!("x_{}^2", coordinate + 1),
    };
    ScalarSeries::new(values, &label).map_err(CliError::from_run)
}

/// Per-coordinate efficiency reports for every requested function.
pub(crate) fn function_reports(
    rows: &KeptRows,
    functions: &[FunctionKind],
    acf_k_max: Option<usize>,
) -> CliResult<BTreeMap<String, Vec<EfficiencyReport>>> {
    let acceptance = rows.acceptance()?;
    let mut out = BTreeMap::new();
    for f in functions {
        let mut reports = Vec::with_capacity(rows.dimension);
        for d in 0..rows.dimension {
            let series = function_series(rows, *f, d)?;
            reports.push(
                EfficiencyReport::compute(&series, acceptance, acf_k_max)
                    .map_err(CliError::from_run)?,
            );
        }
        out.insert(f.label().to_string(), reports);
    }
    Ok(out)
}
