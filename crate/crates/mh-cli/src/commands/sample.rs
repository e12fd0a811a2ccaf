use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use mh_core::acceptance::AcceptanceRule;
use mh_core::chain::{run_chain, run_within_gibbs, ChainMode, ChainTrace};
use mh_core::diagnostics::{AcceptanceRate, EfficiencyReport};
use mh_core::targets::LogTarget;

use crate::commands::{function_reports, KeptRows};
use crate::config::Config;
use crate::errors::{CliError, CliResult};
use crate::io::{write_acf_csv, write_json, write_trace_csv};
use crate::model::{
    build_acceptance, build_functions, build_target, ChainSpec, FunctionKind, ProposalSpec,
    TargetInfo,
};

pub struct SampleArgs {
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub chains: Option<usize>,
    pub keep_burnin: bool,
    pub quiet: bool,
}

#[derive(serde::Serialize)]
struct ChainSummary {
    chain: usize,
    seed: u64,
    acceptance: AcceptanceRate,
    functions: BTreeMap<String, Vec<EfficiencyReport>>,
}

#[derive(serde::Serialize)]
struct SampleSummary {
    command: &'static str,
    target: TargetInfo,
    iterations: usize,
    burn_in: usize,
    mode: &'static str,
    chain_count: usize,
    keep_burnin: bool,
    chains: Vec<ChainSummary>,
}

pub(crate) struct SamplePlan {
    pub target: LogTarget,
    pub target_info: TargetInfo,
    pub proposal_spec: ProposalSpec,
    pub rule: AcceptanceRule,
    pub functions: Vec<FunctionKind>,
    pub chain_spec: ChainSpec,
    pub acf_k_max: Option<usize>,
}

/// Builds and validates everything the sample/sweep commands share.
pub(crate) fn build_plan(
    cfg: &Config,
    seed_override: Option<u64>,
    chains_override: Option<usize>,
) -> CliResult<SamplePlan> {
    let (target, target_info) = build_target(cfg)?;
    let proposal_spec = ProposalSpec::from_config(cfg)?;
    let rule = build_acceptance(cfg)?;
    let functions = build_functions(cfg)?;
    let chain_spec = ChainSpec::from_config(cfg, target.dimension(), seed_override, chains_override)?;
    let acf_k_max = cfg.get_usize("diagnostics.k_max")?;
    // catch rule/proposal mismatches at config time
    let probe = proposal_spec.build(&target, None)?;
    if rule.requires_symmetric_proposal() && !probe.symmetric() {
        return Err(CliError::Config(
            "acceptance.kind = tempered requires a symmetric proposal".to_string(),
        ));
    }
    Ok(SamplePlan {
        target,
        target_info,
        proposal_spec,
        rule,
        functions,
        chain_spec,
        acf_k_max,
    })
}

pub(crate) fn run_one_chain(plan: &SamplePlan, index: usize) -> CliResult<ChainTrace> {
    let cfg = plan.chain_spec.chain_config(index);
    match plan.chain_spec.mode {
        ChainMode::Block => {
            let proposal = plan.proposal_spec.build(&plan.target, None)?;
            run_chain(&cfg, &plan.target, &proposal, &plan.rule).map_err(CliError::from_run)
        }
        ChainMode::Componentwise => {
            let proposals = plan.proposal_spec.build_componentwise(&plan.target)?;
            run_within_gibbs(&cfg, &plan.target, &proposals, &plan.rule).map_err(CliError::from_run)
        }
    }
}

pub fn run(args: &SampleArgs) -> CliResult<()> {
    let cfg = Config::parse_file(&args.config)?;
    cfg.check_keys(&crate::model::sample_keys())?;
    let plan = build_plan(&cfg, args.seed, args.chains)?;
    cfg.finish()?;
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::io("cannot create output dir", e))?;

    let n_chains = plan.chain_spec.chains;
    let mut results: Vec<CliResult<ChainSummary>> = Vec::with_capacity(n_chains);
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(n_chains);
        for k in 0..n_chains {
            let plan_ref = &plan;
            let out = args.out.clone();
            let keep = args.keep_burnin;
            handles.push(scope.spawn(move || chain_worker(plan_ref, k, &out, keep)));
        }
        for h in handles {
            results.push(h.join().expect("chain worker panicked"));
        }
    });

    let mut chains = Vec::with_capacity(n_chains);
    for (k, r) in results.into_iter().enumerate() {
        let summary = r?;
        if !args.quiet {
            eprintln!(
                "chain {k}: {} iterations, empirical acceptance {:.4}",
                plan.chain_spec.iterations, summary.acceptance.empirical_rate
            );
        }
        chains.push(summary);
    }

    let summary = SampleSummary {
        command: "sample",
        target: plan.target_info.clone(),
        iterations: plan.chain_spec.iterations,
        burn_in: plan.chain_spec.burn_in,
        mode: match plan.chain_spec.mode {
            ChainMode::Block => "block",
            ChainMode::Componentwise => "componentwise",
        },
        chain_count: n_chains,
        keep_burnin: args.keep_burnin,
        chains,
    };
    write_json(&args.out.join("summary.json"), &summary)
}

fn chain_worker(
    plan: &SamplePlan,
    index: usize,
    out: &Path,
    keep_burnin: bool,
) -> CliResult<ChainSummary> {
    let trace = run_one_chain(plan, index)?;
    let first_row = if keep_burnin { 0 } else { plan.chain_spec.burn_in };
    write_trace_csv(&out.join(format!("chain_{index}.csv")), &trace, first_row)?;
    let rows = KeptRows::from_trace(&trace, first_row);
    let acceptance = rows.acceptance()?;
    let functions = function_reports(&rows, &plan.functions, plan.acf_k_max)?;
    // the acf file always shows the raw coordinates
    if let Some(identity) = functions.get(FunctionKind::Identity.label()) {
        write_acf_csv(&out.join(format!("acf_{index}.csv")), identity)?;
    } else {
        let identity = function_reports(&rows, &[FunctionKind::Identity], plan.acf_k_max)?;
        write_acf_csv(
            &out.join(format!("acf_{index}.csv")),
            &identity[FunctionKind::Identity.label()],
        )?;
    }
    Ok(ChainSummary {
        chain: index,
        seed: plan.chain_spec.seed + index as u64,
        acceptance,
        functions,
    })
}
