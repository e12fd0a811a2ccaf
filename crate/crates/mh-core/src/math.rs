//! Small numeric helpers shared across modules.


pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Smallest acceptance probability distinguishable by a `[0,1)` uniform
/// draw with 53-bit resolution. Probabilities below it collapse to zero.
pub(crate) const ALPHA_RESOLUTION: f64 = 1.0 / 9_007_199_254_740_992.0; // 2^-53

/// Numerically stable logistic function e^t / (1 + e^t).
pub(crate) fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Log-density of a diagonal Gaussian, fully normalized.
///
/// Targets and proposals share this routine so that a proposal equal in
/// shape to the target cancels bit-for-bit in the acceptance ratio.
pub(crate) fn gaussian_diag_log_pdf(x: &[f64], mean: &[f64], sigma: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), mean.len());
    debug_assert_eq!(x.len(), sigma.len());
    let mut quad = 0.0;
    let mut log_det = 0.0;
    for d in 0..x.len() {
        let u = (x[d] - mean[d]) / sigma[d];
        quad += u * u;
        log_det += sigma[d].ln();
    }
    -0.5 * quad - log_det - 0.5 * (x.len() as f64) * LN_2PI
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / core::f64::consts::SQRT_2))
}

pub(crate) fn all_finite(x: &[f64]) -> bool {
    x.iter().all(|v| v.is_finite())
}
