//! Conditional proposal distributions q(z|x).
//!
//! Three families cover the classic choices: a symmetric Gaussian random
//! walk, a state-independent Gaussian, and a Langevin drift proposal that
//! shifts the mean along the target's log-gradient. Densities are proper
//! (normalized); the acceptance ratio only needs them up to a constant,
//! but normalization makes the quadrature spot-check meaningful.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::math::{all_finite, gaussian_diag_log_pdf};
use crate::targets::LogTarget;
use crate::{Error, Result};

#[derive(Clone)]
enum Kind {
    RandomWalkGaussian { sigma: Vec<f64> },
    IndependentGaussian { mean: Vec<f64>, sigma: Vec<f64> },
    MalaDrift { sigma: f64, target: LogTarget },
}

/// A conditional sampler/density q(z|x) with structural flags.
#[derive(Clone)]
pub struct Proposal {
    dimension: usize,
    kind: Kind,
}

impl core::fmt::Debug for Proposal {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let kind = match &self.kind {
            Kind::RandomWalkGaussian { .. } => "random_walk_gaussian",
            Kind::IndependentGaussian { .. } => "independent_gaussian",
            Kind::MalaDrift { .. } => "mala_drift",
        };
        f.debug_struct("Proposal")
            .field("kind", &kind)
            .field("dimension", &self.dimension)
            .finish()
    }
}

fn validate_sigmas(dimension: usize, sigma: &[f64]) -> Result<Vec<f64>> {
    if dimension == 0 {
        return Err(Error::Config(String::from("proposal dimension must be >= 1")));
    }
    let sigmas: Vec<f64> = match sigma.len() {
        1 => alloc::vec![sigma[0]; dimension],
        n if n == dimension => sigma.to_vec(),
        n => {
            return Err(Error::Config(format!(
                "proposal sigma has {n} entries, expected 1 or {dimension}"
            )))
        }
    };
    if sigmas.iter().any(|s| !s.is_finite() || *s <= 0.0) {
        return Err(Error::Config(String::from("proposal sigma must be positive and finite")));
    }
    Ok(sigmas)
}

impl Proposal {
    /// Gaussian random walk `z ~ N(x, diag(sigma^2))`; symmetric.
    ///
    /// `sigma` is either a single scalar (isotropic) or one entry per
    /// coordinate (diagonal covariance).
    pub fn random_walk_gaussian(dimension: usize, sigma: &[f64]) -> Result<Self> {
        Ok(Self {
            dimension,
            kind: Kind::RandomWalkGaussian {
                sigma: validate_sigmas(dimension, sigma)?,
            },
        })
    }

    /// State-independent Gaussian `z ~ N(mean, diag(sigma^2))`.
    pub fn independent_gaussian(mean: &[f64], sigma: &[f64]) -> Result<Self> {
        let dimension = mean.len();
        if !all_finite(mean) {
            return Err(Error::Config(String::from("proposal mean must be finite")));
        }
        Ok(Self {
            dimension,
            kind: Kind::IndependentGaussian {
                mean: mean.to_vec(),
                sigma: validate_sigmas(dimension, sigma)?,
            },
        })
    }

    /// Langevin drift `z ~ N(x + (sigma^2/2) grad log pi(x), sigma^2 I)`.
    ///
    /// The target must carry a gradient. This proposal is not symmetric, so
    /// it must always be paired with the full (non-simplified) acceptance
    /// ratio; [`crate::acceptance::compute_log_ratio`] does that.
    pub fn mala_drift(sigma: f64, target: &LogTarget) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::Config(String::from("proposal sigma must be positive and finite")));
        }
        if !target.has_gradient() {
            return Err(Error::Config(format!(
                "mala_drift requires a gradient on target '{}'",
                target.name()
            )));
        }
        Ok(Self {
            dimension: target.dimension(),
            kind: Kind::MalaDrift {
                sigma,
                target: target.clone(),
            },
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// True when q(z|x) = q(x|z) for all pairs.
    pub fn symmetric(&self) -> bool {
        matches!(self.kind, Kind::RandomWalkGaussian { .. })
    }

    /// True when q(z|x) does not depend on x.
    pub fn independent(&self) -> bool {
        matches!(self.kind, Kind::IndependentGaussian { .. })
    }

    fn drift_mean(&self, x: &[f64], sigma: f64, target: &LogTarget) -> Result<Vec<f64>> {
        let grad = target.gradient(x).expect("mala target has gradient");
        if !all_finite(&grad) {
            return Err(Error::NonFiniteGradient { state: x.to_vec() });
        }
        let mean: Vec<f64> = x
            .iter()
            .zip(&grad)
            .map(|(xi, gi)| xi + 0.5 * sigma * sigma * gi)
            .collect();
        if !all_finite(&mean) {
            return Err(Error::NonFiniteGradient { state: x.to_vec() });
        }
        Ok(mean)
    }

    /// Draws one candidate given the current state.
    ///
    /// Consumes exactly `dimension` standard-normal draws from `rng`, in
    /// coordinate order, for every proposal family.
    pub fn sample<R: Rng + ?Sized>(&self, x: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        if x.len() != self.dimension {
            return Err(Error::Argument(format!(
                "state has {} coordinates, proposal expects {}",
                x.len(),
                self.dimension
            )));
        }
        if !all_finite(x) {
            return Err(Error::Argument(String::from("proposal origin must be finite")));
        }
        match &self.kind {
            Kind::RandomWalkGaussian { sigma } => Ok((0..self.dimension)
                .map(|d| x[d] + sigma[d] * rng.sample::<f64, _>(StandardNormal))
                .collect()),
            Kind::IndependentGaussian { mean, sigma } => Ok((0..self.dimension)
                .map(|d| mean[d] + sigma[d] * rng.sample::<f64, _>(StandardNormal))
                .collect()),
            Kind::MalaDrift { sigma, target } => {
                let mean = self.drift_mean(x, *sigma, target)?;
                Ok((0..self.dimension)
                    .map(|d| mean[d] + sigma * rng.sample::<f64, _>(StandardNormal))
                    .collect())
            }
        }
    }

    /// Exact log conditional density log q(z|x).
    pub fn log_q(&self, z: &[f64], x: &[f64]) -> Result<f64> {
        if z.len() != self.dimension || x.len() != self.dimension {
            return Err(Error::Argument(String::from("log_q dimension mismatch")));
        }
        if !all_finite(z) || !all_finite(x) {
            return Err(Error::Argument(String::from("log_q arguments must be finite")));
        }
        match &self.kind {
            Kind::RandomWalkGaussian { sigma } => Ok(gaussian_diag_log_pdf(z, x, sigma)),
            Kind::IndependentGaussian { mean, sigma } => Ok(gaussian_diag_log_pdf(z, mean, sigma)),
            Kind::MalaDrift { sigma, target } => {
                let mean = self.drift_mean(x, *sigma, target)?;
                let sigmas = alloc::vec![*sigma; self.dimension];
                Ok(gaussian_diag_log_pdf(z, &mean, &sigmas))
            }
        }
    }

    /// Importance weight log w(x) = log pi(x) - log q(x) of an independent
    /// proposal.
    pub fn importance_weight(&self, target: &LogTarget, x: &[f64]) -> Result<f64> {
        if !self.independent() {
            return Err(Error::Contract(String::from(
                "importance_weight requires an independent proposal",
            )));
        }
        if target.dimension() != self.dimension {
            return Err(Error::Argument(String::from(
                "importance_weight target dimension mismatch",
            )));
        }
        Ok(target.log_density(x) - self.log_q(x, x)?)
    }
}
