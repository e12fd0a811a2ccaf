//! `mh` — a config-driven Metropolis-Hastings sampling CLI.
//!
//! Subcommands: `sample` (run chains, write trace CSVs + summary JSON),
//! `sweep` (acceptance/ESS over a sigma grid), `analyze` (recompute
//! diagnostics from a trace CSV), `discrete` (finite-state chain
//! analysis), `anneal` (simulated annealing). Exit codes: 0 success,
//! 2 configuration error, 3 runtime error.

mod commands;
mod config;
mod errors;
mod io;
mod model;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::analyze::AnalyzeArgs;
use commands::anneal::AnnealArgs;
use commands::discrete::DiscreteArgs;
use commands::sample::SampleArgs;
use commands::sweep::SweepArgs;

#[derive(Parser)]
#[command(name = "mh", version, about = "Metropolis-Hastings sampling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded MH chains and write traces, acf files and a summary.
    Sample {
        /// Flat key=value run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (`chain_<k>.csv`, `acf_<k>.csv`, summary.json).
        #[arg(long)]
        out: PathBuf,
        /// Override chain.seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Override chain.chains from the config.
        #[arg(long)]
        chains: Option<usize>,
        /// Keep burn-in rows in the trace files and diagnostics.
        #[arg(long)]
        keep_burnin: bool,
        /// Suppress progress output.
        #[arg(long)]
        quiet: bool,
    },
    /// Sweep the proposal scale over a grid, one seeded chain per point.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (sweep.csv).
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        quiet: bool,
    },
    /// Recompute diagnostics from a trace CSV.
    Analyze {
        /// Trace CSV produced by `sample`.
        #[arg(long)]
        trace: PathBuf,
        /// Output directory (analysis.json, acf.csv).
        #[arg(long)]
        out: PathBuf,
        /// Cap for the autocorrelation CSV lag axis.
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long)]
        quiet: bool,
    },
    /// Analyze a finite-state transition matrix.
    Discrete {
        /// Plain-text file: n, then n*n kernel entries row-major
        /// (column-stochastic), then n start-pmf entries.
        #[arg(long)]
        matrix: PathBuf,
        /// Report the invariant pmf found by power iteration.
        #[arg(long)]
        invariant: bool,
        /// Report the eigenvalue spectrum.
        #[arg(long)]
        spectrum: bool,
        /// Report the burn-in length from the file's start pmf.
        #[arg(long)]
        burnin: bool,
        /// Report the detailed-balance violation w.r.t. the invariant pmf.
        #[arg(long)]
        balance: bool,
        /// Build the MH kernel targeting the file's pmf with the file's
        /// matrix as proposal.
        #[arg(long = "build-mh")]
        build_mh: bool,
        /// Rounding criterion for --burnin.
        #[arg(long, default_value_t = 4)]
        decimals: u32,
        /// Acceptance rule for --build-mh (standard | barker).
        #[arg(long, default_value = "standard")]
        rule: String,
        /// Residual tolerance for power iteration.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        quiet: bool,
    },
    /// Simulated annealing; reports the best state found.
    Anneal {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (anneal.json).
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        quiet: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample {
            config,
            out,
            seed,
            chains,
            keep_burnin,
            quiet,
        } => commands::sample::run(&SampleArgs {
            config,
            out,
            seed,
            chains,
            keep_burnin,
            quiet,
        }),
        Command::Sweep {
            config,
            out,
            seed,
            quiet,
        } => commands::sweep::run(&SweepArgs {
            config,
            out,
            seed,
            quiet,
        }),
        Command::Analyze {
            trace,
            out,
            k_max,
            quiet,
        } => commands::analyze::run(&AnalyzeArgs {
            trace,
            out,
            k_max,
            quiet,
        }),
        Command::Discrete {
            matrix,
            invariant,
            spectrum,
            burnin,
            balance,
            build_mh,
            decimals,
            rule,
            tol,
            quiet,
        } => commands::discrete::run(&DiscreteArgs {
            matrix,
            invariant,
            spectrum,
            burnin,
            balance,
            build_mh,
            decimals,
            rule,
            tol,
            quiet,
        }),
        Command::Anneal {
            config,
            out,
            seed,
            quiet,
        } => commands::anneal::run(&AnnealArgs {
            config,
            out,
            seed,
            quiet,
        }),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
