use std::path::PathBuf;

use mh_core::annealing::anneal;
use mh_core::chain::ChainMode;

use crate::config::Config;
use crate::errors::{CliError, CliResult};
use crate::io::write_json;
use crate::model::{build_schedule, build_target, ChainSpec, ProposalSpec};

pub struct AnnealArgs {
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub quiet: bool,
}

#[derive(serde::Serialize)]
struct AnnealRun {
    seed: u64,
    best_state: Vec<f64>,
    best_log_density: f64,
    iterations_to_best: usize,
}

#[derive(serde::Serialize)]
struct AnnealSummary {
    command: &'static str,
    best_state: Vec<f64>,
    best_log_density: f64,
    iterations_to_best: usize,
    runs: Vec<AnnealRun>,
}

pub fn run(args: &AnnealArgs) -> CliResult<()> {
    let cfg = Config::parse_file(&args.config)?;
    cfg.check_keys(&crate::model::anneal_keys())?;
    let (target, _info) = build_target(&cfg)?;
    let proposal_spec = ProposalSpec::from_config(&cfg)?;
    let schedule = build_schedule(&cfg)?;
    let chain_spec = ChainSpec::from_config(&cfg, target.dimension(), args.seed, None)?;
    cfg.finish()?;
    if chain_spec.mode != ChainMode::Block {
        return Err(CliError::Config("annealing runs in block mode".to_string()));
    }
    let proposal = proposal_spec.build(&target, None)?;
    if !proposal.symmetric() {
        return Err(CliError::Config(
            "annealing requires a symmetric proposal (random_walk_gaussian)".to_string(),
        ));
    }

    let n_runs = chain_spec.chains;
    let mut results: Vec<CliResult<AnnealRun>> = Vec::with_capacity(n_runs);
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(n_runs);
        for k in 0..n_runs {
            let (target, proposal, schedule) = (&target, &proposal, &schedule);
            let cfg_k = chain_spec.chain_config(k);
            handles.push(scope.spawn(move || {
                let result = anneal(target, proposal, schedule, &cfg_k).map_err(CliError::from_run)?;
                Ok(AnnealRun {
                    seed: cfg_k.seed,
                    best_state: result.best_state,
                    best_log_density: result.best_log_density,
                    iterations_to_best: result.iterations_to_best,
                })
            }));
        }
        for h in handles {
            results.push(h.join().expect("anneal worker panicked"));
        }
    });

    let mut runs = Vec::with_capacity(n_runs);
    for r in results {
        runs.push(r?);
    }
    let best = runs
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            a.best_log_density
                .partial_cmp(&b.best_log_density)
                .expect("finite log densities")
                .then(ib.cmp(ia)) // ties go to the earliest run
        })
        .map(|(_, r)| r)
        .expect("at least one run");

    if !args.quiet {
        eprintln!(
            "best log density {} at {:?} (iteration {})",
            best.best_log_density, best.best_state, best.iterations_to_best
        );
    }
    let summary = AnnealSummary {
        command: "anneal",
        best_state: best.best_state.clone(),
        best_log_density: best.best_log_density,
        iterations_to_best: best.iterations_to_best,
        runs,
    };
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::io("cannot create output dir", e))?;
    write_json(&args.out.join("anneal.json"), &summary)
}
