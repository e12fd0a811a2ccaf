use std::path::PathBuf;

use mh_core::acceptance::AcceptanceRule;
use mh_core::discrete::{
    build_mh_kernel, burn_in_length, detailed_balance_check, invariant_pmf, power_iterate,
    spectrum, BalanceReport, Eigenvalue, Pmf, TransitionMatrix,
};

use crate::errors::{CliError, CliResult};

pub struct DiscreteArgs {
    pub matrix: PathBuf,
    pub invariant: bool,
    pub spectrum: bool,
    pub burnin: bool,
    pub balance: bool,
    pub build_mh: bool,
    pub decimals: u32,
    pub rule: String,
    pub tol: f64,
    pub quiet: bool,
}

#[derive(serde::Serialize)]
struct InvariantOut {
    pmf: Vec<f64>,
    residual: f64,
}

#[derive(serde::Serialize)]
struct BurnInOut {
    steps: usize,
    decimals: u32,
}

#[derive(serde::Serialize)]
struct BuildMhOut {
    rule: String,
    kernel: Vec<Vec<f64>>,
    balance: BalanceReport,
    stationarity_residual: f64,
}

#[derive(serde::Serialize)]
struct DiscreteOut {
    command: &'static str,
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariant: Option<InvariantOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectrum: Option<Vec<Eigenvalue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    burn_in: Option<BurnInOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    balance: Option<BalanceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    build_mh: Option<BuildMhOut>,
}

/// Matrix file grammar: whitespace/newline separated numbers with `#`
/// comments; first `n`, then the `n x n` kernel row-major, then the `n`
/// start-pmf entries.
fn parse_matrix_file(path: &PathBuf) -> CliResult<(TransitionMatrix, Pmf)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read matrix file {}: {e}", path.display())))?;
    let mut tokens = Vec::new();
    for raw in text.lines() {
        let line = match raw.find('#') {
            Some(idx) => &raw[..idx],
            None => raw,
        };
        tokens.extend(line.split_whitespace().map(str::to_string));
    }
    let mut iter = tokens.iter();
    let n: usize = iter
        .next()
        .ok_or_else(|| CliError::Config("matrix file is empty".to_string()))?
        .parse()
        .map_err(|_| CliError::Config("matrix file must start with the state count".to_string()))?;
    if n == 0 {
        return Err(CliError::Config("state count must be >= 1".to_string()));
    }
    let expected = n * n + n;
    let numbers: Vec<f64> = iter
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::Config(format!("cannot parse number {t:?} in matrix file")))
        })
        .collect::<CliResult<_>>()?;
    if numbers.len() != expected {
        return Err(CliError::Config(format!(
            "matrix file has {} numbers after the size, expected {expected} ({n}x{n} entries plus {n} start probabilities)",
            numbers.len()
        )));
    }
    let kernel =
        TransitionMatrix::validate(n, &numbers[..n * n]).map_err(CliError::from_build)?;
    let start = Pmf::new(numbers[n * n..].to_vec()).map_err(CliError::from_build)?;
    Ok((kernel, start))
}

fn stationarity_residual(k: &TransitionMatrix, pi: &Pmf) -> CliResult<f64> {
    let moved = power_iterate(k, pi, 1).map_err(CliError::from_run)?;
    Ok(moved
        .probabilities()
        .iter()
        .zip(pi.probabilities())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

pub fn run(args: &DiscreteArgs) -> CliResult<()> {
    if !(args.invariant || args.spectrum || args.burnin || args.balance || args.build_mh) {
        return Err(CliError::Config(
            "no quantities requested: pass at least one of --invariant --spectrum --burnin --balance --build-mh"
                .to_string(),
        ));
    }
    let (kernel, start) = parse_matrix_file(&args.matrix)?;
    let mut out = DiscreteOut {
        command: "discrete",
        size: kernel.size(),
        invariant: None,
        spectrum: None,
        burn_in: None,
        balance: None,
        build_mh: None,
    };
    if args.invariant {
        let pi = invariant_pmf(&kernel, args.tol).map_err(CliError::from_run)?;
        out.invariant = Some(InvariantOut {
            residual: stationarity_residual(&kernel, &pi)?,
            pmf: pi.probabilities().to_vec(),
        });
    }
    if args.spectrum {
        out.spectrum = Some(spectrum(&kernel).map_err(CliError::from_run)?);
    }
    if args.burnin {
        let steps = burn_in_length(&kernel, &start, args.decimals).map_err(CliError::from_run)?;
        out.burn_in = Some(BurnInOut {
            steps,
            decimals: args.decimals,
        });
    }
    if args.balance {
        let pi = invariant_pmf(&kernel, args.tol).map_err(CliError::from_run)?;
        out.balance = Some(detailed_balance_check(&kernel, &pi).map_err(CliError::from_run)?);
    }
    if args.build_mh {
        let rule = match args.rule.as_str() {
            "standard" => AcceptanceRule::Standard,
            "barker" => AcceptanceRule::Barker,
            other => {
                return Err(CliError::Config(format!(
                    "--rule must be standard or barker, got {other:?}"
                )))
            }
        };
        let built = build_mh_kernel(&start, &kernel, &rule).map_err(CliError::from_run)?;
        let balance = detailed_balance_check(&built, &start).map_err(CliError::from_run)?;
        out.build_mh = Some(BuildMhOut {
            rule: args.rule.clone(),
            stationarity_residual: stationarity_residual(&built, &start)?,
            kernel: built.to_rows(),
            balance,
        });
    }
    if !args.quiet {
        eprintln!("analyzed {}-state kernel from {}", kernel.size(), args.matrix.display());
    }
    let text = serde_json::to_string_pretty(&out)
        .map_err(|e| CliError::Runtime(format!("json serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}
