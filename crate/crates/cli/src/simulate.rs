//! Monte-Carlo runs compared side by side with the analytic probabilities.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use kerr_mzi_core::analytics::{conditional_probs_a, standard_probs_b};
use kerr_mzi_core::montecarlo::{
    binomial_z_score, conditioned_statistics, ConditionedStats, CountsRecord, RNG_SCHEME,
};
use kerr_mzi_core::state::{basis_index, evolve};
use kerr_mzi_core::{Arm, CircuitParams, Interferometer};

use crate::format;
use crate::parallel::run_experiment_parallel;

pub const CSV_HEADER: &str = "quantity,count,total,empirical,analytic,z_score";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulateSpec {
    pub params: CircuitParams,
    pub n_trials: u64,
    pub seed: u64,
    /// Port of `B` the statistics are conditioned on.
    pub port: Arm,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub quantity: String,
    pub count: Option<u64>,
    pub total: u64,
    pub empirical: Option<f64>,
    pub analytic: Option<f64>,
    pub z_score: Option<f64>,
}

impl Row {
    fn binomial(quantity: impl Into<String>, count: u64, total: u64, analytic: Option<f64>) -> Self {
        Row {
            quantity: quantity.into(),
            count: Some(count),
            total,
            empirical: (total > 0).then(|| count as f64 / total as f64),
            analytic,
            z_score: analytic.and_then(|p| binomial_z_score(count, total, p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub spec: SimulateSpec,
    pub counts: CountsRecord,
    pub stats: ConditionedStats,
    pub rows: Vec<Row>,
    /// Closed-form conditional `P̃_Ay`, available for `φ = 0` and port `y`.
    pub closed_form_p_ay: Option<f64>,
}

pub fn port_label(port: Arm) -> &'static str {
    match port {
        Arm::X => "Bx",
        Arm::Y => "By",
    }
}

fn arm_letter(arm: Arm) -> char {
    match arm {
        Arm::X => 'x',
        Arm::Y => 'y',
    }
}

pub fn simulate(spec: &SimulateSpec) -> Result<SimulationReport> {
    let p = &spec.params;
    if !p.is_finite() {
        bail!("circuit parameters must be finite");
    }
    let counts = run_experiment_parallel(p, spec.n_trials, spec.seed, spec.threads)?;
    let stats = conditioned_statistics(&counts, spec.port);
    let state = evolve(p);
    let joint = state.joint_probabilities();

    let mut rows = Vec::with_capacity(7);
    for a in [Arm::X, Arm::Y] {
        for b in [Arm::X, Arm::Y] {
            let label = format!("A{}B{}", arm_letter(a), arm_letter(b));
            rows.push(Row::binomial(label, counts.count(a, b), counts.n_trials, Some(joint[basis_index(a, b)])));
        }
    }

    let marginal = standard_probs_b(p.vartheta, p.chi);
    let rate = match spec.port {
        Arm::X => marginal.p_x,
        Arm::Y => marginal.p_y,
    };
    rows.push(Row::binomial("postselection_rate", stats.n_postselected, counts.n_trials, Some(rate)));

    let conditional = state.postselect(Interferometer::B, spec.port).ok().map(|c| c.probabilities());
    rows.push(Row::binomial(
        "conditional_p_ay",
        stats.n_ay,
        stats.n_postselected,
        conditional.map(|(_, p_ay)| p_ay),
    ));

    let closed_form_p_ay = (p.phi == 0.0 && spec.port == Arm::Y)
        .then(|| conditional_probs_a(p.vartheta, p.chi).ok().map(|(_, p_ay)| p_ay))
        .flatten();

    Ok(SimulationReport {
        spec: *spec,
        counts,
        stats,
        rows,
        closed_form_p_ay,
    })
}

impl SimulationReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let count = r.count.map_or_else(|| format::NA.to_string(), |c| c.to_string());
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.quantity,
                count,
                r.total,
                format::optional(r.empirical),
                format::optional(r.analytic),
                format::optional(r.z_score),
            );
        }
        out
    }

    fn row(&self, quantity: &str) -> &Row {
        self.rows.iter().find(|r| r.quantity == quantity).expect("row present")
    }

    /// One-line summary of the postselection rate and the conditioned `p̂`.
    pub fn summary(&self) -> String {
        let rate = self.row("postselection_rate");
        let cond = self.row("conditional_p_ay");
        let mut s = format!(
            "trials={} seed={} rng={} port={} postselected={} empirical_rate={} analytic_rate={} rate_z={} p_hat={} analytic_p_ay={} p_hat_z={}",
            self.counts.n_trials,
            self.counts.seed,
            RNG_SCHEME,
            port_label(self.spec.port),
            self.stats.n_postselected,
            format::optional(rate.empirical),
            format::optional(rate.analytic),
            format::optional(rate.z_score),
            format::optional(cond.empirical),
            format::optional(cond.analytic),
            format::optional(cond.z_score),
        );
        if let Some(p) = self.closed_form_p_ay {
            let _ = write!(s, " closed_form_p_ay={}", format::number(p));
        }
        s
    }
}
