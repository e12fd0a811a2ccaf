//! Unnormalized log-target functions.
//!
//! A [`LogTarget`] wraps an evaluable log pi(x) (up to an additive
//! constant) together with an optional gradient. `-inf` marks zero target
//! mass; no downstream operation may depend on the absolute normalization,
//! only on log-density differences.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::math::{all_finite, gaussian_diag_log_pdf, LN_2PI};
use crate::{Error, Result};

type DensityFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradientFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// An evaluable unnormalized log target on `R^D`.
///
/// Values are immutable after construction and cheap to clone (the
/// underlying closures are shared), so one target can be evaluated from
/// many chains concurrently.
#[derive(Clone)]
pub struct LogTarget {
    dimension: usize,
    name: String,
    log_density: Arc<DensityFn>,
    gradient: Option<Arc<GradientFn>>,
}

impl core::fmt::Debug for LogTarget {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("LogTarget")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("has_gradient", &self.gradient.is_some())
            .finish()
    }
}

impl LogTarget {
    pub fn new<F>(dimension: usize, name: &str, log_density: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if dimension == 0 {
            return Err(Error::Config(String::from("target dimension must be >= 1")));
        }
        Ok(Self {
            dimension,
            name: String::from(name),
            log_density: Arc::new(log_density),
            gradient: None,
        })
    }

    pub fn with_gradient<F, G>(dimension: usize, name: &str, log_density: F, gradient: G) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        let mut t = Self::new(dimension, name, log_density)?;
        t.gradient = Some(Arc::new(gradient));
        Ok(t)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    /// Evaluates log pi(x). May return `-inf` for zero-mass points; never `+inf`.
    pub fn log_density(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dimension, "state dimension mismatch");
        (self.log_density)(x)
    }

    /// Evaluates grad log pi(x), if the target carries a gradient.
    pub fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        assert_eq!(x.len(), self.dimension, "state dimension mismatch");
        self.gradient.as_ref().map(|g| g(x))
    }

    /// Isotropic standard normal in `dimension` coordinates.
    pub fn standard_gaussian(dimension: usize) -> Self {
        let mean = alloc::vec![0.0; dimension];
        let sigma = alloc::vec![1.0; dimension];
        make_gaussian_target(&mean, GaussianScale::Diagonal(sigma)).expect("valid parameters")
    }
}

/// Scale parameterization for [`make_gaussian_target`].
#[derive(Debug, Clone)]
pub enum GaussianScale {
    /// sigma^2 I
    Isotropic(f64),
    /// diag(sigma_1^2, ..., sigma_D^2)
    Diagonal(Vec<f64>),
    /// Full covariance matrix, row-major `D x D`.
    Covariance(Vec<f64>),
}

/// Builds an exact multivariate normal log target with exact gradient.
pub fn make_gaussian_target(mean: &[f64], scale: GaussianScale) -> Result<LogTarget> {
    let d = mean.len();
    if d == 0 {
        return Err(Error::Config(String::from("gaussian target needs dimension >= 1")));
    }
    if !all_finite(mean) {
        return Err(Error::Config(String::from("gaussian mean must be finite")));
    }
    let sigmas = match scale {
        GaussianScale::Isotropic(s) => alloc::vec![s; d],
        GaussianScale::Diagonal(s) => s,
        GaussianScale::Covariance(data) => {
            return gaussian_full_covariance(mean, &data);
        }
    };
    if sigmas.len() != d {
        return Err(Error::Config(format!(
            "gaussian scale has {} entries, mean has {}",
            sigmas.len(),
            d
        )));
    }
    if sigmas.iter().any(|s| !s.is_finite() || *s <= 0.0) {
        return Err(Error::Config(String::from("gaussian scale must be positive and finite")));
    }
    let mean_owned: Vec<f64> = mean.to_vec();
    let m2 = mean_owned.clone();
    let s2 = sigmas.clone();
    LogTarget::with_gradient(
        d,
        "gaussian",
        move |x| gaussian_diag_log_pdf(x, &mean_owned, &sigmas),
        move |x| {
            (0..x.len())
                .map(|i| -(x[i] - m2[i]) / (s2[i] * s2[i]))
                .collect()
        },
    )
}

fn gaussian_full_covariance(mean: &[f64], cov_row_major: &[f64]) -> Result<LogTarget> {
    let d = mean.len();
    if cov_row_major.len() != d * d {
        return Err(Error::Config(format!(
            "covariance must be {d}x{d} row-major, got {} entries",
            cov_row_major.len()
        )));
    }
    let cov = nalgebra::DMatrix::from_row_slice(d, d, cov_row_major);
    let chol = nalgebra::Cholesky::new(cov)
        .ok_or_else(|| Error::Config(String::from("covariance is not positive definite")))?;
    let log_det: f64 = chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>() * 2.0;
    let chol = Arc::new(chol);
    let mean_owned: Vec<f64> = mean.to_vec();
    let m2 = mean_owned.clone();
    let c2 = Arc::clone(&chol);
    LogTarget::with_gradient(
        d,
        "gaussian",
        move |x| {
            let diff = nalgebra::DVector::from_iterator(
                x.len(),
                x.iter().zip(&mean_owned).map(|(a, b)| a - b),
            );
            let solved = chol.solve(&diff);
            -0.5 * diff.dot(&solved) - 0.5 * log_det - 0.5 * (x.len() as f64) * LN_2PI
        },
        move |x| {
            let diff =
                nalgebra::DVector::from_iterator(x.len(), x.iter().zip(&m2).map(|(a, b)| a - b));
            let solved = c2.solve(&diff);
            solved.iter().map(|v| -v).collect()
        },
    )
}

/// Two-component Gaussian mixture with shared isotropic scale.
pub fn make_gaussian_mixture_target(
    mean_a: &[f64],
    mean_b: &[f64],
    sigma: f64,
    weight_a: f64,
) -> Result<LogTarget> {
    let d = mean_a.len();
    if d == 0 || mean_b.len() != d {
        return Err(Error::Config(String::from(
            "mixture component means must share a dimension >= 1",
        )));
    }
    if !all_finite(mean_a) || !all_finite(mean_b) {
        return Err(Error::Config(String::from("mixture means must be finite")));
    }
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Config(String::from("mixture sigma must be positive and finite")));
    }
    if !(0.0..=1.0).contains(&weight_a) || !weight_a.is_finite() {
        return Err(Error::Config(String::from("mixture weight must lie in [0, 1]")));
    }
    let ma: Vec<f64> = mean_a.to_vec();
    let mb: Vec<f64> = mean_b.to_vec();
    let (ma2, mb2) = (ma.clone(), mb.clone());
    let sig = alloc::vec![sigma; d];
    let sig2 = sig.clone();
    let (lw_a, lw_b) = (weight_a.ln(), (1.0 - weight_a).ln());

    // log(w_a N_a + w_b N_b) via log-sum-exp; gradient is the
    // responsibility-weighted average of the component gradients.
    let log_mix = move |x: &[f64]| -> f64 {
        let la = lw_a + gaussian_diag_log_pdf(x, &ma, &sig);
        let lb = lw_b + gaussian_diag_log_pdf(x, &mb, &sig);
        let m = la.max(lb);
        if m == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        m + ((la - m).exp() + (lb - m).exp()).ln()
    };
    LogTarget::with_gradient(d, "gaussian_mixture", log_mix, move |x| {
        let la = lw_a + gaussian_diag_log_pdf(x, &ma2, &sig2);
        let lb = lw_b + gaussian_diag_log_pdf(x, &mb2, &sig2);
        let m = la.max(lb);
        let (ea, eb) = ((la - m).exp(), (lb - m).exp());
        let (ra, rb) = (ea / (ea + eb), eb / (ea + eb));
        (0..x.len())
            .map(|i| {
                let ga = -(x[i] - ma2[i]) / (sigma * sigma);
                let gb = -(x[i] - mb2[i]) / (sigma * sigma);
                ra * ga + rb * gb
            })
            .collect()
    })
}

/// The curved two-dimensional "banana" benchmark.
///
/// `log pi(x) = -x_1^2/200 - (x_2 + b x_1^2 - 100 b)^2 / 2` with
/// user curvature `b > 0`.
pub fn make_banana_target(curvature: f64) -> Result<LogTarget> {
    if !curvature.is_finite() || curvature <= 0.0 {
        return Err(Error::Config(String::from("banana curvature must be positive and finite")));
    }
    let b = curvature;
    LogTarget::with_gradient(
        2,
        "banana",
        move |x| {
            let w = x[1] + b * x[0] * x[0] - 100.0 * b;
            -x[0] * x[0] / 200.0 - 0.5 * w * w
        },
        move |x| {
            let w = x[1] + b * x[0] * x[0] - 100.0 * b;
            alloc::vec![-x[0] / 100.0 - 2.0 * b * x[0] * w, -w]
        },
    )
}

/// Composes an unnormalized log posterior from log-likelihood and log-prior.
///
/// `-inf` in either summand yields `-inf` (zero posterior mass).
pub fn compose_posterior(log_likelihood: &LogTarget, log_prior: &LogTarget) -> Result<LogTarget> {
    if log_likelihood.dimension() != log_prior.dimension() {
        return Err(Error::Config(format!(
            "likelihood dimension {} != prior dimension {}",
            log_likelihood.dimension(),
            log_prior.dimension()
        )));
    }
    let ll = log_likelihood.clone();
    let lp = log_prior.clone();
    let name = format!("{}*{}", log_likelihood.name(), log_prior.name());
    let density = {
        let (ll, lp) = (ll.clone(), lp.clone());
        move |x: &[f64]| ll.log_density(x) + lp.log_density(x)
    };
    if ll.has_gradient() && lp.has_gradient() {
        LogTarget::with_gradient(ll.dimension(), &name, density, move |x| {
            let a = ll.gradient(x).expect("gradient present");
            let b = lp.gradient(x).expect("gradient present");
            a.iter().zip(&b).map(|(u, v)| u + v).collect()
        })
    } else {
        LogTarget::new(log_likelihood.dimension(), &name, density)
    }
}

/// Raises a target to the power `gamma > 0` (log-density scaled by gamma).
///
/// ```
/// use mh_core::targets::{temper, LogTarget};
///
/// let base = LogTarget::new(1, "quadratic", |x| -x[0] * x[0]).unwrap();
/// let sharpened = temper(&base, 2.0).unwrap();
/// assert_eq!(sharpened.log_density(&[1.0]), -2.0);
/// ```
pub fn temper(base: &LogTarget, gamma: f64) -> Result<LogTarget> {
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::Config(format!(
            "tempering exponent must be positive and finite, got {gamma}"
        )));
    }
    let inner = base.clone();
    let name = format!("tempered({})", base.name());
    let density = {
        let inner = inner.clone();
        move |x: &[f64]| gamma * inner.log_density(x)
    };
    if inner.has_gradient() {
        LogTarget::with_gradient(base.dimension(), &name, density, move |x| {
            inner
                .gradient(x)
                .expect("gradient present")
                .iter()
                .map(|g| gamma * g)
                .collect()
        })
    } else {
        LogTarget::new(base.dimension(), &name, density)
    }
}
