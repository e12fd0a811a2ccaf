//! Chain drivers: the single-step kernel, block runs and componentwise
//! Metropolis-within-Gibbs sweeps.
//!
//! Acceptance uses `u < alpha` with `u ~ Uniform[0,1)`; exactly one
//! uniform is consumed per step (per coordinate in componentwise mode)
//! even when alpha = 1, so traces produced with different rules from the
//! same seed stay draw-aligned and can be compared step by step.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};

use crate::acceptance::{compute_log_ratio, AcceptanceRule, LogRatio};
use crate::proposals::Proposal;
use crate::targets::LogTarget;
use crate::{ChainRng, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMode {
    /// Propose and accept the full D-dimensional state at once.
    Block,
    /// One systematic sweep of scalar updates, coordinate 1..D, per iteration.
    Componentwise,
}

/// Run parameters for a single chain.
#[derive(Debug, Clone)]
pub struct ChainConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub initial_state: Vec<f64>,
    pub mode: ChainMode,
}

impl ChainConfig {
    fn validate(&self, target: &LogTarget) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config(String::from("iterations must be >= 1")));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::Config(format!(
                "burn_in {} must be smaller than iterations {}",
                self.burn_in, self.iterations
            )));
        }
        if self.initial_state.len() != target.dimension() {
            return Err(Error::Config(format!(
                "initial state has {} coordinates, target has dimension {}",
                self.initial_state.len(),
                target.dimension()
            )));
        }
        if !self.initial_state.iter().all(|v| v.is_finite()) {
            return Err(Error::Config(String::from("initial state must be finite")));
        }
        if target.log_density(&self.initial_state) == f64::NEG_INFINITY {
            return Err(Error::InvalidState {
                state: self.initial_state.clone(),
            });
        }
        Ok(())
    }
}

/// Complete record of a chain run: one row per iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTrace {
    dimension: usize,
    initial_state: Vec<f64>,
    states: Vec<f64>,   // iterations x dimension, row-major
    proposed: Vec<f64>, // iterations x dimension, row-major
    alpha_values: Vec<f64>,
    accepted: Vec<bool>,
    acceptance_count: usize,
}

impl ChainTrace {
    fn with_capacity(dimension: usize, initial_state: Vec<f64>, iterations: usize) -> Self {
        Self {
            dimension,
            initial_state,
            states: Vec::with_capacity(iterations * dimension),
            proposed: Vec::with_capacity(iterations * dimension),
            alpha_values: Vec::with_capacity(iterations),
            accepted: Vec::with_capacity(iterations),
            acceptance_count: 0,
        }
    }

    pub(crate) fn from_parts(
        dimension: usize,
        initial_state: Vec<f64>,
        states: Vec<f64>,
        proposed: Vec<f64>,
        alpha_values: Vec<f64>,
        accepted: Vec<bool>,
    ) -> Self {
        debug_assert_eq!(states.len(), alpha_values.len() * dimension);
        debug_assert_eq!(proposed.len(), states.len());
        debug_assert_eq!(accepted.len(), alpha_values.len());
        let acceptance_count = accepted.iter().filter(|a| **a).count();
        Self {
            dimension,
            initial_state,
            states,
            proposed,
            alpha_values,
            accepted,
            acceptance_count,
        }
    }

    fn push(&mut self, state: &[f64], proposed: &[f64], alpha: f64, accepted: bool) {
        self.states.extend_from_slice(state);
        self.proposed.extend_from_slice(proposed);
        self.alpha_values.push(alpha);
        self.accepted.push(accepted);
        if accepted {
            self.acceptance_count += 1;
        }
    }

    /// Number of recorded iterations.
    pub fn len(&self) -> usize {
        self.alpha_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha_values.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn initial_state(&self) -> &[f64] {
        &self.initial_state
    }

    /// State after iteration `t` (0-based row index).
    pub fn state(&self, t: usize) -> &[f64] {
        &self.states[t * self.dimension..(t + 1) * self.dimension]
    }

    /// Candidate proposed at iteration `t`.
    pub fn proposed_at(&self, t: usize) -> &[f64] {
        &self.proposed[t * self.dimension..(t + 1) * self.dimension]
    }

    pub fn alpha_at(&self, t: usize) -> f64 {
        self.alpha_values[t]
    }

    pub fn accepted_at(&self, t: usize) -> bool {
        self.accepted[t]
    }

    pub fn alpha_values(&self) -> &[f64] {
        &self.alpha_values
    }

    pub fn accepted_flags(&self) -> &[bool] {
        &self.accepted
    }

    pub fn acceptance_count(&self) -> usize {
        self.acceptance_count
    }

    /// The values of coordinate `d` along the chain.
    pub fn coordinate(&self, d: usize) -> Vec<f64> {
        assert!(d < self.dimension, "coordinate out of range");
        (0..self.len()).map(|t| self.states[t * self.dimension + d]).collect()
    }

    /// Keeps every `stride`-th row (rows `stride-1, 2*stride-1, ...`).
    pub fn thin(&self, stride: usize) -> Result<ChainTrace> {
        if stride == 0 {
            return Err(Error::Argument(String::from("thinning stride must be >= 1")));
        }
        let mut out = ChainTrace::with_capacity(
            self.dimension,
            self.initial_state.clone(),
            self.len() / stride,
        );
        let mut t = stride - 1;
        while t < self.len() {
            out.push(
                self.state(t),
                self.proposed_at(t),
                self.alpha_values[t],
                self.accepted[t],
            );
            t += stride;
        }
        Ok(out)
    }
}

/// Outcome of a single MH transition.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub next_state: Vec<f64>,
    pub proposed: Vec<f64>,
    pub alpha: f64,
    pub accepted: bool,
}

/// One Metropolis-Hastings transition from `x`.
///
/// Draw order is fixed: first the proposal consumes its draws, then one
/// uniform decides acceptance.
pub fn mh_step<R: Rng + ?Sized>(
    target: &LogTarget,
    proposal: &Proposal,
    rule: &AcceptanceRule,
    x: &[f64],
    rng: &mut R,
) -> Result<StepOutcome> {
    if rule.requires_symmetric_proposal() && !proposal.symmetric() {
        return Err(Error::Contract(String::from(
            "tempered acceptance requires a symmetric proposal",
        )));
    }
    let proposed = proposal.sample(x, rng)?;
    let lr = compute_log_ratio(target, proposal, x, &proposed)?;
    let alpha = rule.alpha(&lr, x, &proposed)?;
    let u: f64 = rng.gen();
    let accepted = u < alpha;
    let next_state = if accepted { proposed.clone() } else { x.to_vec() };
    Ok(StepOutcome {
        next_state,
        proposed,
        alpha,
        accepted,
    })
}

/// Runs a block MH chain for `cfg.iterations` steps.
pub fn run_chain(
    cfg: &ChainConfig,
    target: &LogTarget,
    proposal: &Proposal,
    rule: &AcceptanceRule,
) -> Result<ChainTrace> {
    if cfg.mode != ChainMode::Block {
        return Err(Error::Config(String::from("run_chain requires mode = block")));
    }
    if proposal.dimension() != target.dimension() {
        return Err(Error::Config(format!(
            "proposal dimension {} != target dimension {}",
            proposal.dimension(),
            target.dimension()
        )));
    }
    cfg.validate(target)?;
    let mut rng = ChainRng::seed_from_u64(cfg.seed);
    let mut trace =
        ChainTrace::with_capacity(target.dimension(), cfg.initial_state.clone(), cfg.iterations);
    let mut x = cfg.initial_state.clone();
    for _ in 0..cfg.iterations {
        let step = mh_step(target, proposal, rule, &x, &mut rng)?;
        trace.push(&step.next_state, &step.proposed, step.alpha, step.accepted);
        x = step.next_state;
    }
    Ok(trace)
}

/// Log-ratio of a single-coordinate update using the full-conditional
/// ratio of the joint target.
fn coordinate_log_ratio(
    target: &LogTarget,
    scalar_proposal: &Proposal,
    current: &[f64],
    candidate: &[f64],
    d: usize,
) -> Result<LogRatio> {
    let log_pi_x = target.log_density(current);
    if log_pi_x == f64::NEG_INFINITY {
        return Err(Error::InvalidState {
            state: current.to_vec(),
        });
    }
    let log_pi_z = target.log_density(candidate);
    if log_pi_z == f64::NEG_INFINITY {
        return Ok(LogRatio {
            value: f64::NEG_INFINITY,
            log_pi_z,
            log_pi_x,
            log_q_xz: None,
            log_q_zx: None,
        });
    }
    if scalar_proposal.symmetric() {
        return Ok(LogRatio {
            value: log_pi_z - log_pi_x,
            log_pi_z,
            log_pi_x,
            log_q_xz: None,
            log_q_zx: None,
        });
    }
    let xd = [current[d]];
    let zd = [candidate[d]];
    let log_q_xz = scalar_proposal.log_q(&xd, &zd)?;
    let log_q_zx = scalar_proposal.log_q(&zd, &xd)?;
    Ok(LogRatio {
        value: (log_pi_z + log_q_xz) - (log_pi_x + log_q_zx),
        log_pi_z,
        log_pi_x,
        log_q_xz: Some(log_q_xz),
        log_q_zx: Some(log_q_zx),
    })
}

/// Runs a componentwise Metropolis-within-Gibbs chain.
///
/// Each iteration sweeps the coordinates in ascending order, applying a
/// scalar MH update to each with the full-conditional ratio. The recorded
/// alpha is the mean of the D per-coordinate alphas; the accepted flag
/// records whether any coordinate moved.
pub fn run_within_gibbs(
    cfg: &ChainConfig,
    target: &LogTarget,
    per_coordinate_proposals: &[Proposal],
    rule: &AcceptanceRule,
) -> Result<ChainTrace> {
    if cfg.mode != ChainMode::Componentwise {
        return Err(Error::Config(String::from(
            "run_within_gibbs requires mode = componentwise",
        )));
    }
    let dim = target.dimension();
    if per_coordinate_proposals.len() != dim {
        return Err(Error::Config(format!(
            "{} scalar proposals supplied, target has dimension {}",
            per_coordinate_proposals.len(),
            dim
        )));
    }
    for (d, p) in per_coordinate_proposals.iter().enumerate() {
        if p.dimension() != 1 {
            return Err(Error::Config(format!(
                "proposal for coordinate {d} must be one-dimensional"
            )));
        }
        if rule.requires_symmetric_proposal() && !p.symmetric() {
            return Err(Error::Contract(String::from(
                "tempered acceptance requires symmetric proposals",
            )));
        }
    }
    cfg.validate(target)?;
    let mut rng = ChainRng::seed_from_u64(cfg.seed);
    let mut trace = ChainTrace::with_capacity(dim, cfg.initial_state.clone(), cfg.iterations);
    let mut x = cfg.initial_state.clone();
    let mut candidate = x.clone();
    let mut sweep_proposed = alloc::vec![0.0; dim];
    for _ in 0..cfg.iterations {
        let mut alpha_sum = 0.0;
        let mut any_moved = false;
        for (d, proposal) in per_coordinate_proposals.iter().enumerate() {
            let zd = proposal.sample(&x[d..d + 1], &mut rng)?;
            candidate.copy_from_slice(&x);
            candidate[d] = zd[0];
            sweep_proposed[d] = zd[0];
            let lr = coordinate_log_ratio(target, proposal, &x, &candidate, d)?;
            let alpha = rule.alpha(&lr, &x[d..d + 1], &zd)?;
            let u: f64 = rng.gen();
            if u < alpha {
                x[d] = zd[0];
                any_moved = true;
            }
            alpha_sum += alpha;
        }
        trace.push(&x, &sweep_proposed, alpha_sum / dim as f64, any_moved);
    }
    Ok(trace)
}
