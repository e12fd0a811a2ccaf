//! Finite-state Markov chain toolkit: column-stochastic transition
//! matrices, power iteration, spectra, invariant pmfs, burn-in lengths,
//! detailed-balance checks and exact MH kernel construction.
//!
//! Convention: `entry(i, j)` is the probability of moving *to* state `i`
//! *from* state `j` (columns sum to one), and distributions evolve by
//! `p_{t+1} = K p_t`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use nalgebra::DMatrix;
use rand::Rng;

use crate::acceptance::{AcceptanceRule, LogRatio};
use crate::{Error, Result};

/// Tolerance for user-supplied column sums.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Tolerance for internally constructed pmfs and kernels.
pub const MASS_TOL: f64 = 1e-12;
/// Largest matrix the dense eigensolver accepts.
pub const SPECTRUM_SIZE_CAP: usize = 64;
/// Iteration cap for power iteration.
pub const POWER_ITERATION_CAP: usize = 1_000_000;

/// A validated column-stochastic transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    size: usize,
    entries: DMatrix<f64>,
}

impl TransitionMatrix {
    /// Validates a raw square array (row-major) as column-stochastic.
    pub fn validate(size: usize, row_major: &[f64]) -> Result<Self> {
        if size == 0 || row_major.len() != size * size {
            return Err(Error::Argument(format!(
                "expected {size}x{size} row-major entries, got {}",
                row_major.len()
            )));
        }
        let entries = DMatrix::from_row_slice(size, size, row_major);
        for j in 0..size {
            let mut sum = 0.0;
            for i in 0..size {
                let v = entries[(i, j)];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::MatrixValidation {
                        column: j,
                        reason: format!("entry ({i}, {j}) = {v} is not a probability"),
                    });
                }
                sum += v;
            }
            if (sum - 1.0).abs() > VALIDATION_TOL {
                return Err(Error::MatrixValidation {
                    column: j,
                    reason: format!("column sums to {sum}, expected 1"),
                });
            }
        }
        Ok(Self { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Probability of the transition `j -> i`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.entries[(i, j)]).collect())
            .collect()
    }

    fn apply(&self, p: &[f64]) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.size];
        for (j, &pj) in p.iter().enumerate() {
            if pj != 0.0 {
                for (i, acc) in out.iter_mut().enumerate() {
                    *acc += self.entries[(i, j)] * pj;
                }
            }
        }
        // one renormalization per application keeps mass drift at rounding
        // level even over very long iterations
        let sum: f64 = out.iter().sum();
        for v in &mut out {
            *v /= sum;
        }
        out
    }
}

/// A validated probability mass function.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probabilities: Vec<f64>,
}

impl Pmf {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::Argument(String::from("pmf must not be empty")));
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Argument(String::from("pmf entries must be non-negative")));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(Error::Argument(format!("pmf sums to {sum}, expected 1")));
        }
        Ok(Self { probabilities })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "pmf must have at least one state");
        Self {
            probabilities: alloc::vec![1.0 / n as f64; n],
        }
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

fn check_dims(k: &TransitionMatrix, p: &Pmf) -> Result<()> {
    if k.size() != p.len() {
        return Err(Error::Argument(format!(
            "matrix size {} != pmf size {}",
            k.size(),
            p.len()
        )));
    }
    Ok(())
}

/// Applies the recursion `p_{t+1} = K p_t` for `t` steps.
pub fn power_iterate(k: &TransitionMatrix, p0: &Pmf, t: usize) -> Result<Pmf> {
    check_dims(k, p0)?;
    let mut p = p0.probabilities().to_vec();
    for _ in 0..t {
        p = k.apply(&p);
    }
    debug_assert!((p.iter().sum::<f64>() - 1.0).abs() <= MASS_TOL);
    Ok(Pmf { probabilities: p })
}

fn residual(k: &TransitionMatrix, p: &[f64]) -> (Vec<f64>, f64) {
    let next = k.apply(p);
    let r = next
        .iter()
        .zip(p)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    (next, r)
}

fn iterate_to_fixpoint(k: &TransitionMatrix, start: Vec<f64>, tol: f64) -> Result<Vec<f64>> {
    let mut p = start;
    for _ in 0..POWER_ITERATION_CAP {
        let (next, r) = residual(k, &p);
        if r < tol {
            return Ok(p);
        }
        p = next;
    }
    let (_, r) = residual(k, &p);
    Err(Error::ConvergenceFailure {
        iterations: POWER_ITERATION_CAP,
        residual: r,
        last_iterate: p,
    })
}

/// Finds the stationary pmf by power iteration from the uniform start.
///
/// A second iteration from a deliberately non-uniform probe start must
/// reach the same fixed point; this catches periodic chains (where the
/// uniform start can sit exactly on the oscillation axis, e.g. a two-state
/// swap) and reducible chains with several stationary pmfs.
pub fn invariant_pmf(k: &TransitionMatrix, tol: f64) -> Result<Pmf> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Argument(String::from("tolerance must be positive")));
    }
    let n = k.size();
    let uniform = alloc::vec![1.0 / n as f64; n];
    let ramp_total = (n * (n + 1) / 2) as f64;
    let ramp: Vec<f64> = (1..=n).map(|i| i as f64 / ramp_total).collect();
    let a = iterate_to_fixpoint(k, uniform, tol)?;
    let b = iterate_to_fixpoint(k, ramp, tol)?;
    let disagreement = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    if disagreement > (100.0 * tol).max(1e-8) {
        return Err(Error::ConvergenceFailure {
            iterations: POWER_ITERATION_CAP,
            residual: disagreement,
            last_iterate: a,
        });
    }
    Ok(Pmf { probabilities: a })
}

fn round_to_decimals(x: f64, decimals: u32) -> i64 {
    let scale = 10f64.powi(decimals as i32);
    (x * scale).round() as i64
}

/// Smallest `t` such that `p_t` and the invariant pmf agree when both are
/// rounded to `decimals` decimal places.
pub fn burn_in_length(k: &TransitionMatrix, p0: &Pmf, decimals: u32) -> Result<usize> {
    check_dims(k, p0)?;
    let pi = invariant_pmf(k, 1e-12)?;
    let target: Vec<i64> = pi
        .probabilities()
        .iter()
        .map(|v| round_to_decimals(*v, decimals))
        .collect();
    let matches = |p: &[f64]| {
        p.iter()
            .zip(&target)
            .all(|(v, t)| round_to_decimals(*v, decimals) == *t)
    };
    let mut p = p0.probabilities().to_vec();
    for t in 0..=POWER_ITERATION_CAP {
        if matches(&p) {
            return Ok(t);
        }
        p = k.apply(&p);
    }
    let (_, r) = residual(k, &p);
    Err(Error::ConvergenceFailure {
        iterations: POWER_ITERATION_CAP,
        residual: r,
        last_iterate: p,
    })
}

/// One eigenvalue of a transition matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}

/// Full eigenvalue multiset, sorted by modulus descending.
pub fn spectrum(k: &TransitionMatrix) -> Result<Vec<Eigenvalue>> {
    if k.size() > SPECTRUM_SIZE_CAP {
        return Err(Error::Capability(format!(
            "spectrum supports n <= {SPECTRUM_SIZE_CAP}, got {}",
            k.size()
        )));
    }
    let eigs = k.entries.clone().complex_eigenvalues();
    let mut out: Vec<Eigenvalue> = eigs
        .iter()
        .map(|c| Eigenvalue { re: c.re, im: c.im })
        .collect();
    out.sort_unstable_by(|a, b| {
        (b.modulus(), b.re, b.im)
            .partial_cmp(&(a.modulus(), a.re, a.im))
            .expect("finite eigenvalues")
    });
    Ok(out)
}

/// Detailed-balance scan result.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BalanceReport {
    /// `max_{i != j} |pi_j K_ij - pi_i K_ji|`; zero (to rounding) iff the
    /// chain is reversible with respect to `pi`.
    pub max_violation: f64,
    /// Pair attaining the maximum.
    pub worst_pair: (usize, usize),
}

/// Scans all state pairs for detailed-balance violations.
pub fn detailed_balance_check(k: &TransitionMatrix, pi: &Pmf) -> Result<BalanceReport> {
    check_dims(k, pi)?;
    let p = pi.probabilities();
    let mut report = BalanceReport {
        max_violation: 0.0,
        worst_pair: (0, 0),
    };
    for j in 0..k.size() {
        for i in (j + 1)..k.size() {
            let v = (p[j] * k.entry(i, j) - p[i] * k.entry(j, i)).abs();
            if v > report.max_violation {
                report.max_violation = v;
                report.worst_pair = (i, j);
            }
        }
    }
    Ok(report)
}

/// Builds the exact MH kernel for target pmf `pi` and proposal kernel `q`.
///
/// Off-diagonal entries are `q_ij alpha(j -> i)` with the acceptance ratio
/// `pi_i q_ji / (pi_j q_ij)`; the diagonal absorbs all rejected mass, so
/// columns sum to one by construction. Only the standard and Barker rules
/// yield reversible kernels here.
///
/// ```
/// use mh_core::acceptance::AcceptanceRule;
/// use mh_core::discrete::{build_mh_kernel, detailed_balance_check, Pmf, TransitionMatrix};
///
/// let target = Pmf::new(vec![0.25, 0.75]).unwrap();
/// let proposal = TransitionMatrix::validate(2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
/// let kernel = build_mh_kernel(&target, &proposal, &AcceptanceRule::Standard).unwrap();
/// let report = detailed_balance_check(&kernel, &target).unwrap();
/// assert!(report.max_violation < 1e-15);
/// ```
pub fn build_mh_kernel(
    pi: &Pmf,
    proposal: &TransitionMatrix,
    rule: &AcceptanceRule,
) -> Result<TransitionMatrix> {
    if !matches!(rule, AcceptanceRule::Standard | AcceptanceRule::Barker) {
        return Err(Error::Contract(String::from(
            "build_mh_kernel supports the standard and barker rules",
        )));
    }
    check_dims(proposal, pi)?;
    let p = pi.probabilities();
    if p.iter().any(|v| *v <= 0.0) {
        return Err(Error::Domain(String::from(
            "target pmf must be strictly positive everywhere",
        )));
    }
    let n = proposal.size();
    let mut entries = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut off_diagonal_mass = 0.0;
        for i in 0..n {
            if i == j {
                continue;
            }
            let q_ij = proposal.entry(i, j);
            if q_ij == 0.0 {
                continue;
            }
            let log_ratio = (p[i] * proposal.entry(j, i)).ln() - (p[j] * q_ij).ln();
            let alpha = rule.alpha(&LogRatio::from_value(log_ratio), &[], &[])?;
            let value = q_ij * alpha;
            entries[(i, j)] = value;
            off_diagonal_mass += value;
        }
        entries[(j, j)] = (1.0 - off_diagonal_mass).max(0.0);
    }
    let out = TransitionMatrix { size: n, entries };
    debug_assert!((0..n).all(|j| {
        let s: f64 = (0..n).map(|i| out.entry(i, j)).sum();
        (s - 1.0).abs() <= MASS_TOL
    }));
    Ok(out)
}

/// Samples a state path of length `steps` from the kernel, starting at
/// `start`. The path records the state after each transition.
pub fn simulate_chain<R: Rng + ?Sized>(
    k: &TransitionMatrix,
    start: usize,
    steps: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if start >= k.size() {
        return Err(Error::Argument(format!(
            "start state {start} out of range for {} states",
            k.size()
        )));
    }
    let mut path = Vec::with_capacity(steps);
    let mut state = start;
    for _ in 0..steps {
        let u: f64 = rng.gen();
        let mut cumulative = 0.0;
        let mut next = k.size() - 1;
        for i in 0..k.size() {
            cumulative += k.entry(i, state);
            if u < cumulative {
                next = i;
                break;
            }
        }
        state = next;
        path.push(state);
    }
    Ok(path)
}
