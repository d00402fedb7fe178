//! Binomial click statistics of the measuring interferometer under
//! postselection: likelihood, maximum-likelihood estimate, Fisher information
//! and the resulting phase sensitivity.
//!
//! All logarithms are natural.

use core::f64::consts::{LN_2, PI};

use libm::{cos, exp, lgamma, log, sin, sqrt, tan};

use crate::analytics::{conditional_probs_a, geometric_phase, standard_probs_b};
use crate::error::{Error, Result};
use crate::ZERO_PROBABILITY;

/// Outcome of `n` postselections of which `n_y` clicked in `D_Ay`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClickSample {
    n: u64,
    n_y: u64,
}

impl ClickSample {
    pub fn new(n: u64, n_y: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::DomainError("sample needs at least one postselection"));
        }
        if n_y > n {
            return Err(Error::DomainError("more clicks than postselections"));
        }
        Ok(ClickSample { n, n_y })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn n_y(&self) -> u64 {
        self.n_y
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError("probability outside [0, 1]"));
    }
    Ok(())
}

/// `ln C(n, k)` through log-gamma.
pub fn log_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    lgamma(n as f64 + 1.0) - lgamma(k as f64 + 1.0) - lgamma((n - k) as f64 + 1.0)
}

/// `n_y ln p + (n − n_y) ln(1 − p)`, the part of the log-likelihood that
/// depends on `p`. A term whose count is zero contributes nothing, even at the
/// boundary.
pub fn log_likelihood_kernel(s: &ClickSample, p: f64) -> Result<f64> {
    check_probability(p)?;
    let n_x = s.n - s.n_y;
    let mut l = 0.0;
    if s.n_y > 0 {
        if p == 0.0 {
            return Err(Error::DomainError("log(0) with nonzero click count"));
        }
        l += s.n_y as f64 * log(p);
    }
    if n_x > 0 {
        if p == 1.0 {
            return Err(Error::DomainError("log(0) with nonzero no-click count"));
        }
        l += n_x as f64 * log(1.0 - p);
    }
    Ok(l)
}

/// Full binomial log-likelihood including `ln C(n, n_y)`.
pub fn log_likelihood(s: &ClickSample, p: f64) -> Result<f64> {
    Ok(log_binomial(s.n, s.n_y) + log_likelihood_kernel(s, p)?)
}

/// Binomial probability of the sample given click probability `p`.
pub fn likelihood(s: &ClickSample, p: f64) -> Result<f64> {
    check_probability(p)?;
    match log_likelihood(s, p) {
        Ok(l) => Ok(exp(l)),
        // only reachable at p ∈ {0, 1} with a nonzero opposing count
        Err(Error::DomainError(_)) => Ok(0.0),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlEstimate {
    pub p_ml: f64,
    /// Plug-in variance `p̂(1 − p̂)/n`.
    pub variance: f64,
}

pub fn ml_estimate(s: &ClickSample) -> MlEstimate {
    let n = s.n as f64;
    let p_ml = s.n_y as f64 / n;
    MlEstimate {
        p_ml,
        variance: binomial_variance(n, p_ml),
    }
}

/// Variance `p(1 − p)/n` of the estimator at a known click probability.
pub fn binomial_variance(n: f64, p: f64) -> f64 {
    p * (1.0 - p) / n
}

fn fisher_real(n: f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::SingularFisher);
    }
    Ok(n / (p * (1.0 - p)))
}

/// `n / (p(1 − p))`.
pub fn fisher_information(n: u64, p: f64) -> Result<f64> {
    fisher_real(n as f64, p)
}

fn fisher_at_optimum_real(n: f64, chi: f64) -> Result<f64> {
    let s = sin(geometric_phase(chi));
    let s2 = s * s;
    if s2 < f64::MIN_POSITIVE || !s2.is_finite() {
        return Err(Error::SingularFisher);
    }
    Ok(4.0 * n / s2)
}

/// Fisher information of `n` postselections at `ϑ = π + θ_g`:
/// `4n / sin²(θ_g)`.
pub fn fisher_at_optimum(n: u64, chi: f64) -> Result<f64> {
    fisher_at_optimum_real(n as f64, chi)
}

/// Mean number of runs per postselection on `By`, `1/P_By`.
pub fn mean_runs_per_postselection(chi: f64, vartheta: f64) -> Result<f64> {
    let probability = standard_probs_b(vartheta, chi).p_y;
    if probability.is_nan() || probability <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbabilityPostselection { probability });
    }
    Ok(1.0 / probability)
}

fn postselection_prob_at_optimum(chi: f64) -> f64 {
    standard_probs_b(PI + geometric_phase(chi), chi).p_y
}

/// Fisher information accumulated from a pair source of rate `Γ` over a time
/// `τ` at the out-of-phase setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFisher {
    /// Expected postselections `n = P_By Γ τ`.
    pub postselections: f64,
    pub exact: f64,
    /// Small-`χ` approximation `Γτ`.
    pub approx: f64,
}

pub fn fisher_from_rate(rate: f64, duration: f64, chi: f64) -> Result<RateFisher> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::DomainError("rate must be positive"));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::DomainError("duration must be positive"));
    }
    if !(chi > 0.0 && chi < PI) {
        return Err(Error::DomainError("chi must lie in (0, pi)"));
    }
    let pairs = rate * duration;
    let postselections = postselection_prob_at_optimum(chi) * pairs;
    Ok(RateFisher {
        postselections,
        exact: fisher_at_optimum_real(postselections, chi)?,
        approx: pairs,
    })
}

/// Cramér-Rao bound `1/√F` on the phase uncertainty.
pub fn crb_phase_uncertainty(fisher: f64) -> Result<f64> {
    if fisher.is_nan() || fisher <= 0.0 {
        return Err(Error::SingularFisher);
    }
    Ok(1.0 / sqrt(fisher))
}

/// Small-`χ` form `(χ/4)/√n` of the bound at the out-of-phase setting.
pub fn crb_small_chi(n: f64, chi: f64) -> f64 {
    chi / 4.0 / sqrt(n)
}

/// `√n √(P̃_Ay / P̃_Ax)` with `φ = 0`.
pub fn snr(n: u64, vartheta: f64, chi: f64) -> Result<f64> {
    let (p_ax, p_ay) = conditional_probs_a(vartheta, chi)?;
    if p_ax.is_nan() || p_ax <= ZERO_PROBABILITY {
        return Err(Error::InfiniteSnr { p_ax });
    }
    Ok(sqrt(n as f64) * sqrt(p_ay / p_ax))
}

/// `√n cot(χ/4)`, the SNR at `ϑ = π + θ_g`.
pub fn snr_at_optimum(n: f64, chi: f64) -> f64 {
    sqrt(n) / tan(chi / 4.0)
}

/// `−ln p` in nats.
pub fn self_information(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::DomainError("self-information needs p in (0, 1]"));
    }
    Ok(-log(p))
}

pub fn self_information_bits(p: f64) -> Result<f64> {
    Ok(self_information(p)? / LN_2)
}

/// Displacement of a phase shifter equivalent to `delta_phase` at the given
/// wavelength.
pub fn displacement_sensitivity(delta_phase: f64, wavelength: f64) -> Result<f64> {
    if wavelength.is_nan() || wavelength <= 0.0 {
        return Err(Error::DomainError("wavelength must be positive"));
    }
    Ok(delta_phase * wavelength / (2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationReport {
    pub p_ml: f64,
    pub variance: f64,
    pub fisher: f64,
    pub crb_uncertainty: f64,
    pub snr: f64,
}

impl EstimationReport {
    /// Report built from observed counts, everything evaluated at `p̂`.
    pub fn from_sample(s: &ClickSample) -> Result<Self> {
        let MlEstimate { p_ml, variance } = ml_estimate(s);
        let fisher = fisher_information(s.n, p_ml)?;
        let n = s.n as f64;
        Ok(EstimationReport {
            p_ml,
            variance,
            fisher,
            crb_uncertainty: crb_phase_uncertainty(fisher)?,
            snr: n * p_ml / sqrt(n * p_ml * (1.0 - p_ml)),
        })
    }

    /// Expected report for `n` postselections at `ϑ = π + θ_g`, `φ = 0`.
    pub fn at_out_of_phase(n: u64, chi: f64) -> Result<Self> {
        let q = cos(chi / 4.0);
        let p = q * q;
        let fisher = fisher_at_optimum(n, chi)?;
        Ok(EstimationReport {
            p_ml: p,
            variance: binomial_variance(n as f64, p),
            fisher,
            crb_uncertainty: crb_phase_uncertainty(fisher)?,
            snr: snr_at_optimum(n as f64, chi),
        })
    }
}
