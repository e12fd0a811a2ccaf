//! Builders turning a parsed config into core sampler components.

use mh_core::acceptance::AcceptanceRule;
use mh_core::annealing::CoolingSchedule;
use mh_core::chain::{ChainConfig, ChainMode};
use mh_core::proposals::Proposal;
use mh_core::targets::{
    make_banana_target, make_gaussian_mixture_target, make_gaussian_target, GaussianScale,
    LogTarget,
};

use crate::config::Config;
use crate::errors::{CliError, CliResult};

#[derive(Debug, Clone, serde::Serialize)]
pub struct TargetInfo {
    pub kind: String,
    pub dimension: usize,
}

const TARGET_KEYS: &[&str] = &[
    "target.kind",
    "target.dimension",
    "target.mean",
    "target.sigma",
    "target.mean1",
    "target.mean2",
    "target.weights",
    "target.curvature",
];
const PROPOSAL_KEYS: &[&str] = &["proposal.kind", "proposal.sigma", "proposal.mean"];
const CHAIN_KEYS: &[&str] = &[
    "chain.iterations",
    "chain.burn_in",
    "chain.seed",
    "chain.mode",
    "chain.chains",
    "chain.initial",
];

/// Key vocabulary accepted by `sample`.
pub fn sample_keys() -> Vec<&'static str> {
    let mut keys = Vec::new();
    keys.extend_from_slice(TARGET_KEYS);
    keys.extend_from_slice(PROPOSAL_KEYS);
    keys.extend_from_slice(CHAIN_KEYS);
    keys.extend_from_slice(&[
        "acceptance.kind",
        "acceptance.gamma",
        "output.functions",
        "diagnostics.k_max",
    ]);
    keys
}

/// Key vocabulary accepted by `sweep`: everything `sample` takes plus the grid.
pub fn sweep_keys() -> Vec<&'static str> {
    let mut keys = sample_keys();
    keys.push("sweep.sigmas");
    keys
}

/// Key vocabulary accepted by `anneal`: the schedule replaces the
/// acceptance rule and the diagnostics keys.
pub fn anneal_keys() -> Vec<&'static str> {
    let mut keys = Vec::new();
    keys.extend_from_slice(TARGET_KEYS);
    keys.extend_from_slice(PROPOSAL_KEYS);
    keys.extend_from_slice(CHAIN_KEYS);
    keys.extend_from_slice(&["schedule.kind", "schedule.gamma", "schedule.rate", "schedule.base"]);
    keys
}

fn broadcast(values: Vec<f64>, dimension: usize, key: &str) -> CliResult<Vec<f64>> {
    match values.len() {
        1 => Ok(vec![values[0]; dimension]),
        n if n == dimension => Ok(values),
        n => Err(CliError::Config(format!(
            "key \"{key}\": expected 1 or {dimension} entries, got {n}"
        ))),
    }
}

pub fn build_target(cfg: &Config) -> CliResult<(LogTarget, TargetInfo)> {
    let kind = cfg.require_str("target.kind")?.to_string();
    let target = match kind.as_str() {
        "gaussian" => {
            let dimension = cfg.require_usize("target.dimension")?;
            let mean = broadcast(
                cfg.get_f64_list("target.mean")?.unwrap_or_else(|| vec![0.0]),
                dimension,
                "target.mean",
            )?;
            let sigma = broadcast(
                cfg.get_f64_list("target.sigma")?.unwrap_or_else(|| vec![1.0]),
                dimension,
                "target.sigma",
            )?;
            make_gaussian_target(&mean, GaussianScale::Diagonal(sigma)).map_err(CliError::from_build)?
        }
        "gaussian_mixture" => {
            let dimension = cfg.require_usize("target.dimension")?;
            let mean_a = broadcast(cfg.require_f64_list("target.mean1")?, dimension, "target.mean1")?;
            let mean_b = broadcast(cfg.require_f64_list("target.mean2")?, dimension, "target.mean2")?;
            let weights = cfg.require_f64_list("target.weights")?;
            if weights.len() != 2 {
                return Err(CliError::Config(format!(
                    "key \"target.weights\": expected 2 entries, got {}",
                    weights.len()
                )));
            }
            if (weights[0] + weights[1] - 1.0).abs() > 1e-9 {
                return Err(CliError::Config(format!(
                    "key \"target.weights\": weights sum to {}, expected 1",
                    weights[0] + weights[1]
                )));
            }
            let sigma = cfg.get_f64("target.sigma")?.unwrap_or(1.0);
            make_gaussian_mixture_target(&mean_a, &mean_b, sigma, weights[0])
                .map_err(CliError::from_build)?
        }
        "banana" => {
            if let Some(d) = cfg.get_usize("target.dimension")? {
                if d != 2 {
                    return Err(CliError::Config(format!(
                        "key \"target.dimension\": banana target is two-dimensional, got {d}"
                    )));
                }
            }
            let curvature = cfg.require_f64("target.curvature")?;
            make_banana_target(curvature).map_err(CliError::from_build)?
        }
        other => {
            return Err(CliError::Config(format!(
                "key \"target.kind\": unknown target \"{other}\""
            )))
        }
    };
    let info = TargetInfo {
        kind,
        dimension: target.dimension(),
    };
    Ok((target, info))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProposalKind {
    RandomWalkGaussian,
    IndependentGaussian,
    MalaDrift,
}

#[derive(Debug, Clone)]
pub struct ProposalSpec {
    pub kind: ProposalKind,
    pub sigma: Vec<f64>,
    pub mean: Option<Vec<f64>>,
}

impl ProposalSpec {
    pub fn from_config(cfg: &Config) -> CliResult<Self> {
        let kind = match cfg.require_str("proposal.kind")? {
            "random_walk_gaussian" => ProposalKind::RandomWalkGaussian,
            "independent_gaussian" => ProposalKind::IndependentGaussian,
            "mala_drift" => ProposalKind::MalaDrift,
            other => {
                return Err(CliError::Config(format!(
                    "key \"proposal.kind\": unknown proposal \"{other}\""
                )))
            }
        };
        let sigma = cfg.require_f64_list("proposal.sigma")?;
        let mean = cfg.get_f64_list("proposal.mean")?;
        if mean.is_some() && kind != ProposalKind::IndependentGaussian {
            return Err(CliError::Config(
                "key \"proposal.mean\" only applies to independent_gaussian".to_string(),
            ));
        }
        Ok(Self { kind, sigma, mean })
    }

    /// Builds the proposal for `target`, optionally replacing the scale
    /// (used by the sigma sweep).
    pub fn build(&self, target: &LogTarget, sigma_override: Option<f64>) -> CliResult<Proposal> {
        let dimension = target.dimension();
        let sigma = match sigma_override {
            Some(s) => vec![s],
            None => self.sigma.clone(),
        };
        let made = match self.kind {
            ProposalKind::RandomWalkGaussian => Proposal::random_walk_gaussian(dimension, &sigma),
            ProposalKind::IndependentGaussian => {
                let mean = match &self.mean {
                    Some(m) => broadcast(m.clone(), dimension, "proposal.mean")?,
                    None => vec![0.0; dimension],
                };
                let sigma = broadcast(sigma, dimension, "proposal.sigma")?;
                Proposal::independent_gaussian(&mean, &sigma)
            }
            ProposalKind::MalaDrift => {
                if sigma.len() != 1 {
                    return Err(CliError::Config(
                        "key \"proposal.sigma\": mala_drift takes a single scalar sigma".to_string(),
                    ));
                }
                Proposal::mala_drift(sigma[0], target)
            }
        };
        made.map_err(CliError::from_build)
    }

    /// One scalar proposal per coordinate for componentwise sweeps.
    pub fn build_componentwise(&self, target: &LogTarget) -> CliResult<Vec<Proposal>> {
        if self.kind != ProposalKind::RandomWalkGaussian {
            return Err(CliError::Config(
                "componentwise mode supports proposal.kind = random_walk_gaussian".to_string(),
            ));
        }
        let sigmas = broadcast(self.sigma.clone(), target.dimension(), "proposal.sigma")?;
        sigmas
            .iter()
            .map(|s| Proposal::random_walk_gaussian(1, &[*s]).map_err(CliError::from_build))
            .collect()
    }
}

pub fn build_acceptance(cfg: &Config) -> CliResult<AcceptanceRule> {
    match cfg.get_str("acceptance.kind").unwrap_or("standard") {
        "standard" => Ok(AcceptanceRule::Standard),
        "barker" => Ok(AcceptanceRule::Barker),
        "tempered" => {
            let gamma = cfg.require_f64("acceptance.gamma")?;
            AcceptanceRule::tempered(gamma).map_err(CliError::from_build)
        }
        other => Err(CliError::Config(format!(
            "key \"acceptance.kind\": unknown rule \"{other}\""
        ))),
    }
}

pub fn build_schedule(cfg: &Config) -> CliResult<CoolingSchedule> {
    match cfg.require_str("schedule.kind")? {
        "constant" => {
            CoolingSchedule::constant(cfg.require_f64("schedule.gamma")?).map_err(CliError::from_build)
        }
        "linear" => {
            CoolingSchedule::linear(cfg.require_f64("schedule.rate")?).map_err(CliError::from_build)
        }
        "geometric" => {
            CoolingSchedule::geometric(cfg.require_f64("schedule.base")?).map_err(CliError::from_build)
        }
        other => Err(CliError::Config(format!(
            "key \"schedule.kind\": unknown schedule \"{other}\""
        ))),
    }
}

#[derive(Debug, Clone)]
pub struct ChainSpec {
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub mode: ChainMode,
    pub chains: usize,
    pub initial: Vec<f64>,
}

impl ChainSpec {
    pub fn from_config(
        cfg: &Config,
        dimension: usize,
        seed_override: Option<u64>,
        chains_override: Option<usize>,
    ) -> CliResult<Self> {
        let iterations = cfg.require_usize("chain.iterations")?;
        let burn_in = cfg.get_usize("chain.burn_in")?.unwrap_or(iterations / 10);
        let seed = match seed_override {
            Some(s) => {
                // consume the config key even when the flag wins
                let _ = cfg.get_str("chain.seed");
                s
            }
            None => cfg.require_u64("chain.seed")?,
        };
        let mode = match cfg.get_str("chain.mode").unwrap_or("block") {
            "block" => ChainMode::Block,
            "componentwise" => ChainMode::Componentwise,
            other => {
                return Err(CliError::Config(format!(
                    "key \"chain.mode\": unknown mode \"{other}\""
                )))
            }
        };
        let chains = match chains_override {
            Some(c) => {
                let _ = cfg.get_str("chain.chains");
                c
            }
            None => cfg.get_usize("chain.chains")?.unwrap_or(1),
        };
        if chains == 0 {
            return Err(CliError::Config("key \"chain.chains\": must be >= 1".to_string()));
        }
        let initial = match cfg.get_f64_list("chain.initial")? {
            Some(v) => broadcast(v, dimension, "chain.initial")?,
            None => vec![0.0; dimension],
        };
        Ok(Self {
            iterations,
            burn_in,
            seed,
            mode,
            chains,
            initial,
        })
    }

    /// Per-chain config with the derived seed `seed + index`.
    pub fn chain_config(&self, index: usize) -> ChainConfig {
        ChainConfig {
            iterations: self.iterations,
            burn_in: self.burn_in,
            seed: self.seed + index as u64,
            initial_state: self.initial.clone(),
            mode: self.mode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Identity,
    Squared,
}

impl FunctionKind {
    pub fn label(&self) -> &'static str {
        match self {
            FunctionKind::Identity => "identity",
            FunctionKind::Squared => "squared",
        }
    }

    pub fn apply(&self, v: f64) -> f64 {
        match self {
            FunctionKind::Identity => v,
            FunctionKind::Squared => v * v,
        }
    }
}

pub fn build_functions(cfg: &Config) -> CliResult<Vec<FunctionKind>> {
    let names = cfg
        .get_name_list("output.functions")
        .unwrap_or_else(|| vec!["identity".to_string()]);
    let mut out = Vec::new();
    for name in names {
        let f = match name.as_str() {
            "identity" => FunctionKind::Identity,
            "squared" => FunctionKind::Squared,
            other => {
                return Err(CliError::Config(format!(
                    "key \"output.functions\": unknown function \"{other}\""
                )))
            }
        };
        if !out.contains(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> Config {
        Config::parse_str(text).unwrap()
    }

    #[test]
    fn gaussian_target_from_config() {
        let c = cfg("target.kind = gaussian\ntarget.dimension = 3\ntarget.sigma = 2\n");
        let (t, info) = build_target(&c).unwrap();
        assert_eq!(t.dimension(), 3);
        assert_eq!(info.kind, "gaussian");
        c.finish().unwrap();
    }

    #[test]
    fn banana_dimension_must_be_two() {
        let c = cfg("target.kind = banana\ntarget.curvature = 0.1\ntarget.dimension = 3\n");
        assert!(build_target(&c).is_err());
    }

    #[test]
    fn proposal_mean_only_for_independent() {
        let c = cfg("proposal.kind = random_walk_gaussian\nproposal.sigma = 1\nproposal.mean = 0\n");
        assert!(ProposalSpec::from_config(&c).is_err());
    }

    #[test]
    fn seed_override_wins_but_consumes_key() {
        let c = cfg("chain.iterations = 100\nchain.seed = 5\n");
        let spec = ChainSpec::from_config(&c, 2, Some(9), None).unwrap();
        assert_eq!(spec.seed, 9);
        assert_eq!(spec.burn_in, 10);
        c.finish().unwrap();
    }

    #[test]
    fn seed_is_required_without_override() {
        let c = cfg("chain.iterations = 100\n");
        let err = ChainSpec::from_config(&c, 1, None, None).unwrap_err();
        assert!(err.to_string().contains("chain.seed"));
    }

    #[test]
    fn function_list_parses_and_dedupes() {
        let c = cfg("output.functions = identity, squared, identity\n");
        let fs = build_functions(&c).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].label(), "identity");
        assert_eq!(fs[1].apply(3.0), 9.0);
    }
}
