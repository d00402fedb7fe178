//! Seeded Monte-Carlo realization of the detector clicks.
//!
//! Trials are split into fixed-size chunks. Chunk `k` draws from a ChaCha8
//! stream keyed by `(seed, k)`, so the counts are a pure function of
//! `(params, n_trials, seed)` no matter how chunks are scheduled or merged.
//! Each trial maps one uniform deviate onto the four joint outcomes by
//! inverse CDF.

use libm::sqrt;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::analytics::arccos_clamped;
use crate::error::{Error, Result};
use crate::estimation::{log_likelihood_kernel, ClickSample};
use crate::state::{basis_index, evolve, Arm, CircuitParams};

/// Identifier of the sampling scheme. Bump when any detail that changes the
/// counts for a given seed changes.
pub const RNG_SCHEME: &str = "chacha8-stream-per-chunk-v1";

/// Trials per independently seeded chunk.
pub const CHUNK_TRIALS: u64 = 1 << 16;

/// Detector pair that clicked in one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TrialOutcome {
    pub a_port: Arm,
    pub b_port: Arm,
}

impl TrialOutcome {
    const ALL: [TrialOutcome; 4] = [
        TrialOutcome { a_port: Arm::X, b_port: Arm::X },
        TrialOutcome { a_port: Arm::X, b_port: Arm::Y },
        TrialOutcome { a_port: Arm::Y, b_port: Arm::X },
        TrialOutcome { a_port: Arm::Y, b_port: Arm::Y },
    ];

    pub fn from_index(index: usize) -> Self {
        Self::ALL[index]
    }

    pub fn index(&self) -> usize {
        basis_index(self.a_port, self.b_port)
    }
}

/// Inverse-CDF sampler over the four joint outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeSampler {
    cumulative: [f64; 3],
}

impl OutcomeSampler {
    pub fn new(params: &CircuitParams) -> Self {
        Self::from_probabilities(evolve(params).joint_probabilities())
    }

    pub fn from_probabilities(probs: [f64; 4]) -> Self {
        let mut cumulative = [0.0; 3];
        let mut acc = 0.0;
        for (c, p) in cumulative.iter_mut().zip(probs.iter()) {
            acc += p;
            *c = acc;
        }
        OutcomeSampler { cumulative }
    }

    /// Outcome index for a uniform deviate in `[0, 1)`. Rounding slack at the
    /// top of the CDF falls into the last outcome.
    #[inline]
    pub fn index_for(&self, u: f64) -> usize {
        self.cumulative.iter().take_while(|&&c| u >= c).count()
    }

    pub fn sample(&self, rng: &mut impl RngCore) -> TrialOutcome {
        TrialOutcome::from_index(self.index_for(uniform(rng)))
    }
}

/// Uniform deviate in `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Generator for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

pub fn chunk_count(n_trials: u64) -> u64 {
    n_trials.div_ceil(CHUNK_TRIALS)
}

pub fn chunk_len(n_trials: u64, chunk: u64) -> u64 {
    let start = chunk * CHUNK_TRIALS;
    n_trials.saturating_sub(start).min(CHUNK_TRIALS)
}

/// Joint counts produced by one chunk.
pub fn count_chunk(sampler: &OutcomeSampler, seed: u64, chunk: u64, len: u64) -> [u64; 4] {
    let mut rng = chunk_rng(seed, chunk);
    let mut counts = [0u64; 4];
    for _ in 0..len {
        counts[sampler.index_for(uniform(&mut rng))] += 1;
    }
    counts
}

/// Click tallies of a simulated experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountsRecord {
    pub params: CircuitParams,
    pub n_trials: u64,
    pub seed: u64,
    /// Counts of `AxBx, AxBy, AyBx, AyBy`.
    pub joint_counts: [u64; 4],
}

impl CountsRecord {
    pub fn empty(params: CircuitParams, seed: u64) -> Self {
        CountsRecord {
            params,
            n_trials: 0,
            seed,
            joint_counts: [0; 4],
        }
    }

    pub fn count(&self, a: Arm, b: Arm) -> u64 {
        self.joint_counts[basis_index(a, b)]
    }

    /// Fold in the counts of one chunk.
    pub fn absorb(&mut self, counts: [u64; 4]) {
        for (total, c) in self.joint_counts.iter_mut().zip(counts) {
            *total += c;
            self.n_trials += c;
        }
    }
}

/// Run `n_trials` independent trials sequentially.
pub fn run_experiment(params: &CircuitParams, n_trials: u64, seed: u64) -> CountsRecord {
    let sampler = OutcomeSampler::new(params);
    let mut record = CountsRecord::empty(*params, seed);
    for chunk in 0..chunk_count(n_trials) {
        record.absorb(count_chunk(&sampler, seed, chunk, chunk_len(n_trials, chunk)));
    }
    record
}

/// Counts restricted to runs where B clicked at `port`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionedStats {
    pub port: Arm,
    pub n_postselected: u64,
    pub n_ay: u64,
    pub n_ax: u64,
    /// `n_ay / n_postselected`, `None` when nothing was postselected.
    pub p_hat: Option<f64>,
    /// `n_postselected / n_trials`, `None` for an empty run.
    pub empirical_rate: Option<f64>,
}

impl ConditionedStats {
    pub fn is_empty(&self) -> bool {
        self.n_postselected == 0
    }

    pub fn click_sample(&self) -> Result<ClickSample> {
        if self.is_empty() {
            return Err(Error::EmptySample);
        }
        ClickSample::new(self.n_postselected, self.n_ay)
    }
}

pub fn conditioned_statistics(c: &CountsRecord, port: Arm) -> ConditionedStats {
    let n_ax = c.count(Arm::X, port);
    let n_ay = c.count(Arm::Y, port);
    let n_postselected = n_ax + n_ay;
    ConditionedStats {
        port,
        n_postselected,
        n_ay,
        n_ax,
        p_hat: (n_postselected > 0).then(|| n_ay as f64 / n_postselected as f64),
        empirical_rate: (c.n_trials > 0).then(|| n_postselected as f64 / c.n_trials as f64),
    }
}

/// `arccos((n_Ax − n_Ay)/(n_Ax + n_Ay))` on raw counts.
pub fn empirical_inferred_phase(stats: &ConditionedStats) -> Result<f64> {
    if stats.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = stats.n_postselected as f64;
    arccos_clamped((stats.n_ax as f64 - stats.n_ay as f64) / n)
}

fn interior_p_hat(stats: &ConditionedStats) -> Result<f64> {
    let p_hat = stats.p_hat.ok_or(Error::EmptySample)?;
    if p_hat <= 0.0 || p_hat >= 1.0 {
        return Err(Error::DegenerateSample { p_hat });
    }
    Ok(p_hat)
}

/// Mean over standard deviation of the `D_Ay` clicks,
/// `n_Ay / √(n p̂ (1 − p̂))`.
pub fn empirical_snr(stats: &ConditionedStats) -> Result<f64> {
    let p_hat = interior_p_hat(stats)?;
    let n = stats.n_postselected as f64;
    Ok(stats.n_ay as f64 / sqrt(n * p_hat * (1.0 - p_hat)))
}

/// Observed information: minus the central second difference of the
/// log-likelihood at `p̂`.
///
/// Step `h = max(1e-5, 1e-3·min(p̂, 1 − p̂))`, capped at half the distance to
/// the nearer boundary. The `ln C(n, n_y)` term is constant in `p` and is left
/// out of the difference.
pub fn empirical_fisher(sample: &ClickSample) -> Result<f64> {
    let n = sample.n() as f64;
    let p_hat = sample.n_y() as f64 / n;
    if p_hat <= 0.0 || p_hat >= 1.0 {
        return Err(Error::DegenerateSample { p_hat });
    }
    let edge = p_hat.min(1.0 - p_hat);
    let h = (1e-3 * edge).max(1e-5).min(0.5 * edge);
    let lo = log_likelihood_kernel(sample, p_hat - h)?;
    let mid = log_likelihood_kernel(sample, p_hat)?;
    let hi = log_likelihood_kernel(sample, p_hat + h)?;
    Ok(-(hi - 2.0 * mid + lo) / (h * h))
}

/// Binomial z-score of `successes` out of `trials` against probability `p`.
///
/// Frequencies that agree with `p` to within `1e-12` score exactly zero, which
/// also covers `p ∈ {0, 1}`. `None` when the deviation is real but the
/// binomial spread vanishes, or when `trials = 0`.
pub fn binomial_z_score(successes: u64, trials: u64, p: f64) -> Option<f64> {
    if trials == 0 {
        return None;
    }
    let n = trials as f64;
    let freq = successes as f64 / n;
    let diff = freq - p;
    if diff.abs() <= 1e-12 {
        return Some(0.0);
    }
    let sigma = sqrt(p * (1.0 - p) / n);
    if sigma.is_nan() || sigma <= 0.0 {
        return None;
    }
    Some(diff / sigma)
}
