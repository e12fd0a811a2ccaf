//! Estimators and efficiency diagnostics for scalar functionals along a
//! chain: mean, autocovariance/autocorrelation, integrated autocorrelation
//! time (IAT), effective sample size (ESS), the autocorrelation-aware
//! estimator variance, and acceptance rates.
//!
//! Conventions, applied consistently by every estimator here:
//!
//! - autocovariances use the biased `1/T` normalization, which keeps the
//!   sequence positive semidefinite and `|rho_k| <= 1`;
//! - infinite sums over `rho_k` are truncated at the first lag with
//!   `rho_k <= 0`, scanning at most `K_max = min(T-1, 10 sqrt(T))` lags;
//! - the IAT used for ESS is floored at 0.1 so noisy anticorrelation can
//!   inflate the reported ESS at most tenfold; the raw IAT is reported
//!   alongside and may legitimately sit below 1 for anticorrelated series.

use alloc::string::String;
use alloc::vec::Vec;

use crate::chain::ChainTrace;
use crate::{Error, Result};

pub use crate::math::normal_cdf;

/// Floor applied to the IAT when converting it to an ESS.
pub const IAT_FLOOR: f64 = 0.1;

/// Default lag cap for the truncated autocorrelation sums.
pub fn default_k_max(len: usize) -> usize {
    let by_sqrt = (10.0 * (len as f64).sqrt()).floor() as usize;
    core::cmp::min(len.saturating_sub(1), by_sqrt)
}

/// A finite scalar series f(x^(t)) evaluated along a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSeries {
    values: Vec<f64>,
    label: String,
}

impl ScalarSeries {
    pub fn new(values: Vec<f64>, label: &str) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Argument(String::from("series must not be empty")));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::Argument(String::from("series values must be finite")));
        }
        Ok(Self {
            values,
            label: String::from(label),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn centered(&self) -> (Vec<f64>, f64) {
        let mean = estimate_mean(self);
        (self.values.iter().map(|v| v - mean).collect(), mean)
    }
}

/// Arithmetic mean of the series (the basic Monte Carlo estimator).
pub fn estimate_mean(series: &ScalarSeries) -> f64 {
    series.values.iter().sum::<f64>() / series.len() as f64
}

fn autocovariance_at(centered: &[f64], k: usize) -> f64 {
    let len = centered.len();
    let mut acc = 0.0;
    for t in 0..len - k {
        acc += centered[t] * centered[t + k];
    }
    acc / len as f64
}

/// Autocorrelations `rho_0..rho_k_max` with the biased normalization.
pub fn autocorrelation(series: &ScalarSeries, k_max: usize) -> Result<Vec<f64>> {
    if k_max >= series.len() {
        return Err(Error::Argument(String::from("k_max must be smaller than the series length")));
    }
    let (centered, _) = series.centered();
    let gamma0 = autocovariance_at(&centered, 0);
    if gamma0 <= 0.0 {
        return Err(Error::DegenerateSeries);
    }
    let mut rho = Vec::with_capacity(k_max + 1);
    rho.push(1.0);
    for k in 1..=k_max {
        rho.push((autocovariance_at(&centered, k) / gamma0).clamp(-1.0, 1.0));
    }
    Ok(rho)
}

/// ESS and integrated autocorrelation time of a series.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EssEstimate {
    /// Effective sample size `T / max(iat, 0.1)`.
    pub ess: f64,
    /// Raw integrated autocorrelation time `1 + 2 sum rho_k`.
    pub iat: f64,
    /// Lag at which the positive-sequence scan stopped.
    pub cutoff_lag: usize,
}

struct TruncatedSums {
    gamma0: f64,
    rho_sum: f64,
    weighted_rho_sum: f64, // sum (T - k) rho_k
    cutoff_lag: usize,
}

fn truncated_sums(series: &ScalarSeries) -> Result<TruncatedSums> {
    let len = series.len();
    let (centered, _) = series.centered();
    let gamma0 = autocovariance_at(&centered, 0);
    if gamma0 <= 0.0 {
        return Err(Error::DegenerateSeries);
    }
    let k_max = default_k_max(len);
    let mut rho_sum = 0.0;
    let mut weighted = 0.0;
    let mut cutoff = k_max + 1;
    for k in 1..=k_max {
        let rho = (autocovariance_at(&centered, k) / gamma0).clamp(-1.0, 1.0);
        if rho <= 0.0 {
            cutoff = k;
            break;
        }
        rho_sum += rho;
        weighted += (len - k) as f64 * rho;
    }
    Ok(TruncatedSums {
        gamma0,
        rho_sum,
        weighted_rho_sum: weighted,
        cutoff_lag: cutoff,
    })
}

/// Effective sample size `T_eff = T / (1 + 2 sum rho_k)` with the
/// initial-positive-sequence truncation.
///
/// ```
/// use mh_core::diagnostics::{ess, ScalarSeries};
///
/// // a maximally anticorrelated series carries one effective sample per draw
/// let values: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
/// let series = ScalarSeries::new(values, "alternating").unwrap();
/// let estimate = ess(&series).unwrap();
/// assert_eq!(estimate.iat, 1.0); // rho_1 < 0, so the sum truncates immediately
/// assert_eq!(estimate.ess, 1000.0);
/// ```
pub fn ess(series: &ScalarSeries) -> Result<EssEstimate> {
    let sums = truncated_sums(series)?;
    let iat = 1.0 + 2.0 * sums.rho_sum;
    Ok(EssEstimate {
        ess: series.len() as f64 / iat.max(IAT_FLOOR),
        iat,
        cutoff_lag: sums.cutoff_lag,
    })
}

/// Plug-in estimate of the variance of the chain mean:
/// `(sigma_f^2/T) (1 + (2/T) sum (T-k) rho_k)`.
pub fn estimator_variance(series: &ScalarSeries) -> Result<f64> {
    let len = series.len() as f64;
    let sums = truncated_sums(series)?;
    Ok((sums.gamma0 / len) * (1.0 + (2.0 / len) * sums.weighted_rho_sum))
}

/// The two acceptance-rate estimators of a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AcceptanceRate {
    /// Mean of the recorded alpha values (Monte Carlo estimate of the
    /// acceptance-rate integral).
    pub mean_alpha: f64,
    /// Fraction of iterations that actually moved.
    pub empirical_rate: f64,
}

/// Acceptance rate from recorded alphas and accept flags.
pub fn acceptance_rate_from_parts(alphas: &[f64], accepted: &[bool]) -> Result<AcceptanceRate> {
    if alphas.is_empty() || alphas.len() != accepted.len() {
        return Err(Error::Argument(String::from(
            "acceptance rate needs matching, non-empty alpha and accept records",
        )));
    }
    let n = alphas.len() as f64;
    Ok(AcceptanceRate {
        mean_alpha: alphas.iter().sum::<f64>() / n,
        empirical_rate: accepted.iter().filter(|a| **a).count() as f64 / n,
    })
}

/// Acceptance rate of a full trace.
pub fn acceptance_rate(trace: &ChainTrace) -> Result<AcceptanceRate> {
    acceptance_rate_from_parts(trace.alpha_values(), trace.accepted_flags())
}

/// Full efficiency summary for one scalar functional of a trace.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EfficiencyReport {
    pub label: String,
    pub mean: f64,
    /// Biased sample variance of the series (gamma_0).
    pub variance_f: f64,
    /// `rho_0..rho_k` up to the display cap; not serialized (it goes to
    /// the autocorrelation CSV instead).
    #[cfg_attr(feature = "serde", serde(skip))]
    pub autocorrelations: Vec<f64>,
    pub ess: f64,
    /// Raw IAT (may be < 1 for anticorrelated series).
    pub iat: f64,
    pub estimator_variance: f64,
    pub acceptance_rate: AcceptanceRate,
}

impl EfficiencyReport {
    /// Computes every diagnostic for one series.
    ///
    /// `acf_k_max` caps only the stored autocorrelation array (defaults to
    /// `default_k_max`); the ESS/variance truncation rule is unaffected.
    pub fn compute(
        series: &ScalarSeries,
        acceptance: AcceptanceRate,
        acf_k_max: Option<usize>,
    ) -> Result<Self> {
        let k_max = acf_k_max
            .unwrap_or_else(|| default_k_max(series.len()))
            .min(series.len() - 1);
        let autocorrelations = autocorrelation(series, k_max)?;
        let est = ess(series)?;
        let (centered, mean) = series.centered();
        let variance_f = autocovariance_at(&centered, 0);
        Ok(Self {
            label: String::from(series.label()),
            mean,
            variance_f,
            autocorrelations,
            ess: est.ess,
            iat: est.iat,
            estimator_variance: estimator_variance(series)?,
            acceptance_rate: acceptance,
        })
    }
}

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `samples` (which must be finite) and the reference CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in sorted.iter().enumerate() {
        let f = cdf(*x);
        d = d.max(((i + 1) as f64 / n - f).abs());
        d = d.max((f - i as f64 / n).abs());
    }
    d
}
