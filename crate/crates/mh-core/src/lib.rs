//! Building blocks for Metropolis-Hastings sampling.
//!
//! The crate is organized around the three elements of an MH sampler —
//! the target function, the proposal density and the acceptance rule —
//! plus the machinery that connects them:
//!
//! - [`targets`]: unnormalized log-target functions, posterior composition,
//!   tempering and a few built-in test targets.
//! - [`proposals`]: random-walk, independent and Langevin-drift proposal
//!   distributions with exact conditional log-densities.
//! - [`acceptance`]: the acceptance-probability family (standard, Barker,
//!   Hastings-lambda, tempered) over log-ratios, with structural checks.
//! - [`chain`]: the single-step kernel, block chain driver and
//!   componentwise Metropolis-within-Gibbs sweeps.
//! - [`diagnostics`]: mean/autocorrelation/ESS/acceptance-rate estimators.
//! - [`discrete`]: finite-state kernels, power iteration, spectra,
//!   detailed-balance checks and exact MH kernel construction.
//! - [`annealing`]: simulated annealing with increasing exponent schedules.
//!
//! Everything is deterministic given a seed: samplers take an explicit
//! random stream and never touch global state. All densities are handled
//! in log space; `-inf` is a legal log-density denoting zero mass.
//!
//! ```
//! use mh_core::chain::{run_chain, ChainConfig, ChainMode};
//! use mh_core::proposals::Proposal;
//! use mh_core::targets::LogTarget;
//! use mh_core::acceptance::AcceptanceRule;
//!
//! let target = LogTarget::standard_gaussian(1);
//! let proposal = Proposal::random_walk_gaussian(1, &[2.4]).unwrap();
//! let cfg = ChainConfig {
//!     iterations: 1000,
//!     burn_in: 100,
//!     seed: 7,
//!     initial_state: vec![0.0],
//!     mode: ChainMode::Block,
//! };
//! let trace = run_chain(&cfg, &target, &proposal, &AcceptanceRule::Standard).unwrap();
//! assert_eq!(trace.len(), 1000);
//! ```

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod acceptance;
pub mod annealing;
pub mod chain;
pub mod diagnostics;
pub mod discrete;
mod error;
mod math;
pub mod proposals;
pub mod targets;

pub use error::{Error, Result};

/// The random stream used by all chain drivers. ChaCha gives identical
/// sequences for identical seeds on every platform.
pub type ChainRng = rand_chacha::ChaCha8Rng;
