use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use mh_core::chain::{run_chain, ChainMode};
use mh_core::diagnostics::{ess, ScalarSeries};
use mh_core::Error as CoreError;

use crate::commands::{function_series, KeptRows};
use crate::config::Config;
use crate::errors::{CliError, CliResult};
use crate::model::FunctionKind;

pub struct SweepArgs {
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub quiet: bool,
}

/// Runs one seeded chain per sigma grid point and streams one CSV row per
/// point. Rows are flushed as they complete, so a failure mid-grid leaves
/// the finished rows on disk.
pub fn run(args: &SweepArgs) -> CliResult<()> {
    let cfg = Config::parse_file(&args.config)?;
    cfg.check_keys(&crate::model::sweep_keys())?;
    let plan = super::sample::build_plan(&cfg, args.seed, None)?;
    let sigmas = cfg.require_f64_list("sweep.sigmas")?;
    cfg.finish()?;
    if plan.chain_spec.mode != ChainMode::Block {
        return Err(CliError::Config("sweep runs in block mode".to_string()));
    }
    if plan.chain_spec.chains != 1 {
        return Err(CliError::Config(
            "sweep runs one chain per grid point; set chain.chains = 1".to_string(),
        ));
    }
    if sigmas.is_empty() {
        return Err(CliError::Config("key \"sweep.sigmas\": grid is empty".to_string()));
    }
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::io("cannot create output dir", e))?;
    let file = File::create(args.out.join("sweep.csv"))
        .map_err(|e| CliError::io("cannot create sweep.csv", e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "sigma,mean_alpha,empirical_rate,ess_per_iteration")
        .map_err(|e| CliError::io("sweep write failed", e))?;
    w.flush().map_err(|e| CliError::io("sweep write failed", e))?;

    for (index, sigma) in sigmas.iter().enumerate() {
        let proposal = plan.proposal_spec.build(&plan.target, Some(*sigma))?;
        let mut chain_cfg = plan.chain_spec.chain_config(index);
        chain_cfg.mode = ChainMode::Block;
        let trace =
            run_chain(&chain_cfg, &plan.target, &proposal, &plan.rule).map_err(CliError::from_run)?;
        let rows = KeptRows::from_trace(&trace, plan.chain_spec.burn_in);
        let acceptance = rows.acceptance()?;
        let kept = rows.len() as f64;
        let mut ess_sum = 0.0;
        for d in 0..rows.dimension {
            let series = function_series(&rows, FunctionKind::Identity, d)?;
            ess_sum += ess_or_zero(&series)?;
        }
        let ess_per_iteration = ess_sum / rows.dimension as f64 / kept;
        writeln!(
            w,
            "{sigma},{},{},{ess_per_iteration}",
            acceptance.mean_alpha, acceptance.empirical_rate
        )
        .map_err(|e| CliError::io("sweep write failed", e))?;
        w.flush().map_err(|e| CliError::io("sweep write failed", e))?;
        if !args.quiet {
            eprintln!(
                "sigma {sigma}: mean alpha {:.4}, ess/iteration {:.6}",
                acceptance.mean_alpha, ess_per_iteration
            );
        }
    }
    Ok(())
}

/// A chain that never moves has zero-variance coordinates; report zero
/// effective samples for those instead of aborting the whole grid.
fn ess_or_zero(series: &ScalarSeries) -> CliResult<f64> {
    match ess(series) {
        Ok(est) => Ok(est.ess),
        Err(CoreError::DegenerateSeries) => Ok(0.0),
        Err(other) => Err(CliError::from_run(other)),
    }
}
