//! Simulated annealing on a log target.
//!
//! The annealer is an MH chain whose acceptance uses the tempered rule
//! `min(1, r^{gamma_t})` with a non-decreasing exponent schedule starting
//! at `gamma_0 = 1`. Uphill moves are always accepted; downhill moves get
//! progressively less likely as the exponent grows. The returned optimum
//! is the best state ever visited, not the final one.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::SeedableRng;

use crate::acceptance::AcceptanceRule;
use crate::chain::{mh_step, ChainConfig, ChainMode, ChainTrace};
use crate::proposals::Proposal;
use crate::targets::LogTarget;
use crate::{ChainRng, Error, Result};

/// Exponent schedule gamma_t, evaluated at t = 0, 1, 2, ...
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoolingSchedule {
    /// gamma_t = gamma for all t (gamma >= 1).
    Constant { gamma: f64 },
    /// gamma_t = 1 + rate * t.
    Linear { rate: f64 },
    /// gamma_t = base^t.
    Geometric { base: f64 },
}

impl CoolingSchedule {
    pub fn constant(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 1.0 {
            return Err(Error::Config(format!("constant schedule needs gamma >= 1, got {gamma}")));
        }
        Ok(Self::Constant { gamma })
    }

    pub fn linear(rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::Config(format!("linear schedule needs rate > 0, got {rate}")));
        }
        Ok(Self::Linear { rate })
    }

    pub fn geometric(base: f64) -> Result<Self> {
        if !base.is_finite() || base <= 1.0 {
            return Err(Error::Config(format!("geometric schedule needs base > 1, got {base}")));
        }
        Ok(Self::Geometric { base })
    }

    /// Exponent at step `t`.
    pub fn gamma_at(&self, t: usize) -> f64 {
        match self {
            Self::Constant { gamma } => *gamma,
            Self::Linear { rate } => 1.0 + rate * t as f64,
            Self::Geometric { base } => base.powi(t as i32),
        }
    }
}

/// Result of an annealing run.
#[derive(Debug, Clone)]
pub struct AnnealResult {
    pub best_state: Vec<f64>,
    pub best_log_density: f64,
    pub trace: ChainTrace,
    /// 1-based iteration at which the best state was first reached.
    pub iterations_to_best: usize,
}

/// Runs simulated annealing and returns the best state found.
///
/// Iteration `t` (1-based) uses exponent `gamma_{t-1}`, so the first
/// transition is plain MH. The proposal must be symmetric: the tempered
/// rule exponentiates the bare target ratio.
pub fn anneal(
    target: &LogTarget,
    proposal: &Proposal,
    schedule: &CoolingSchedule,
    cfg: &ChainConfig,
) -> Result<AnnealResult> {
    if !proposal.symmetric() {
        return Err(Error::Contract(String::from(
            "annealing requires a symmetric proposal",
        )));
    }
    if cfg.mode != ChainMode::Block {
        return Err(Error::Config(String::from("annealing runs in block mode")));
    }
    if proposal.dimension() != target.dimension() {
        return Err(Error::Config(String::from(
            "proposal and target dimensions differ",
        )));
    }
    if cfg.iterations == 0 {
        return Err(Error::Config(String::from("iterations must be >= 1")));
    }
    if cfg.initial_state.len() != target.dimension()
        || !cfg.initial_state.iter().all(|v| v.is_finite())
    {
        return Err(Error::Config(String::from("initial state invalid")));
    }
    if target.log_density(&cfg.initial_state) == f64::NEG_INFINITY {
        return Err(Error::InvalidState {
            state: cfg.initial_state.clone(),
        });
    }

    let mut rng = ChainRng::seed_from_u64(cfg.seed);
    let mut trace_states: Vec<f64> = Vec::with_capacity(cfg.iterations * target.dimension());
    let mut x = cfg.initial_state.clone();
    let mut best_state = x.clone();
    let mut best_log_density = f64::NEG_INFINITY;
    let mut iterations_to_best = 0;

    let mut proposed_buf: Vec<f64> = Vec::with_capacity(cfg.iterations * target.dimension());
    let mut alphas = Vec::with_capacity(cfg.iterations);
    let mut accepts = Vec::with_capacity(cfg.iterations);

    for t in 1..=cfg.iterations {
        let rule = AcceptanceRule::Tempered {
            gamma: schedule.gamma_at(t - 1),
        };
        let step = mh_step(target, proposal, &rule, &x, &mut rng)?;
        x = step.next_state;
        trace_states.extend_from_slice(&x);
        proposed_buf.extend_from_slice(&step.proposed);
        alphas.push(step.alpha);
        accepts.push(step.accepted);
        let here = target.log_density(&x);
        if here > best_log_density {
            best_log_density = here;
            best_state = x.clone();
            iterations_to_best = t;
        }
    }

    let trace = ChainTrace::from_parts(
        target.dimension(),
        cfg.initial_state.clone(),
        trace_states,
        proposed_buf,
        alphas,
        accepts,
    );
    Ok(AnnealResult {
        best_state,
        best_log_density,
        trace,
        iterations_to_best,
    })
}
