//! Parameter sweeps over the detuning `ϑ − θ_g`, one CSV column per `χ`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use anyhow::{bail, Result};
use clap::ValueEnum;
use kerr_mzi_core::analytics::{conditional_probs_a, geometric_phase, inferred_phase, standard_probs_b, weak_value};
use kerr_mzi_core::estimation::{fisher_information, snr};
use kerr_mzi_core::CircuitParams;

use crate::format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Quantity {
    /// `P̃_Ay` after postselecting `B` on `y`, with `φ = 0`.
    ConditionalProb,
    /// Phase read off the conditioned clicks of `A`.
    InferredPhase,
    /// Signal-to-noise ratio of `n` postselections, `φ = 0`.
    Snr,
    /// Unconditioned `P_By`.
    StandardProbs,
    /// Imaginary part of the weak value of `|x⟩⟨x|` (the real part is 1/2).
    WeakValue,
    /// Fisher information of `n` postselections, `φ = 0`.
    Fisher,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig2,
    Fig4,
    Fig5,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub quantity: Quantity,
    pub phi: f64,
    /// Use `φ = θ_g(χ)` per column instead of `phi` (inferred phase only).
    pub phi_geometric: bool,
    pub chi_list: Vec<f64>,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub n: u64,
    /// Interpret the axis as raw `ϑ` instead of the detuning.
    pub raw_theta: bool,
}

pub const DEFAULT_STEPS: usize = 721;

impl SweepSpec {
    pub fn new(quantity: Quantity, chi_list: Vec<f64>) -> Self {
        SweepSpec {
            quantity,
            phi: 0.0,
            phi_geometric: false,
            chi_list,
            start: 0.0,
            stop: 2.0 * PI,
            steps: DEFAULT_STEPS,
            n: 1,
            raw_theta: false,
        }
    }

    pub fn preset(preset: Preset) -> Self {
        match preset {
            Preset::Fig2 => Self::new(Quantity::ConditionalProb, vec![0.1, 1.0, 2.0, PI]),
            Preset::Fig4 => Self::new(Quantity::InferredPhase, vec![0.1]),
            Preset::Fig5 => Self::new(Quantity::Snr, vec![0.1, 0.5, 1.0, 2.0]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            bail!("steps must be at least 2, got {}", self.steps);
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            bail!("sweep bounds must be finite");
        }
        if self.start >= self.stop {
            bail!("start must be below stop ({} >= {})", self.start, self.stop);
        }
        if self.chi_list.is_empty() {
            bail!("at least one chi value is required");
        }
        if let Some(chi) = self.chi_list.iter().find(|c| !c.is_finite()) {
            bail!("chi must be finite, got {chi}");
        }
        if !self.phi.is_finite() {
            bail!("phi must be finite");
        }
        if matches!(self.quantity, Quantity::Snr | Quantity::Fisher) && self.n == 0 {
            bail!("n must be positive");
        }
        Ok(())
    }

    /// Axis values, with both endpoints hit exactly.
    pub fn axis(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| match k {
                0 => self.start,
                k if k == self.steps - 1 => self.stop,
                k => self.start + (self.stop - self.start) * (k as f64 / last),
            })
            .collect()
    }

    /// The quantity at one axis point, `None` where it is undefined.
    pub fn evaluate(&self, x: f64, chi: f64) -> Option<f64> {
        let theta_g = geometric_phase(chi);
        let vartheta = if self.raw_theta { x } else { x + theta_g };
        match self.quantity {
            Quantity::ConditionalProb => conditional_probs_a(vartheta, chi).ok().map(|(_, p_ay)| p_ay),
            Quantity::InferredPhase => {
                let phi = if self.phi_geometric { theta_g } else { self.phi };
                inferred_phase(&CircuitParams::new(phi, vartheta, chi)).ok()
            }
            Quantity::Snr => snr(self.n, vartheta, chi).ok(),
            Quantity::StandardProbs => Some(standard_probs_b(vartheta, chi).p_y),
            Quantity::WeakValue => weak_value(vartheta).ok().map(|w| w.value.im),
            Quantity::Fisher => conditional_probs_a(vartheta, chi)
                .ok()
                .and_then(|(_, p_ay)| fisher_information(self.n, p_ay).ok()),
        }
        .filter(|v| v.is_finite())
    }

    pub fn to_csv(&self) -> Result<String> {
        self.validate()?;
        let mut out = String::from(if self.raw_theta { "vartheta_rad" } else { "detuning_rad" });
        for &chi in &self.chi_list {
            write!(out, ",chi={}", format::number(chi))?;
        }
        out.push('\n');
        for x in self.axis() {
            out.push_str(&format::number(x));
            for &chi in &self.chi_list {
                out.push(',');
                out.push_str(&format::optional(self.evaluate(x, chi)));
            }
            out.push('\n');
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_hits_endpoints() {
        let spec = SweepSpec::preset(Preset::Fig2);
        let axis = spec.axis();
        assert_eq!(axis.len(), 721);
        assert_eq!(axis[0], 0.0);
        assert_eq!(axis[360], PI);
        assert_eq!(axis[720], 2.0 * PI);
        assert!(axis.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn invalid_specs() {
        let mut spec = SweepSpec::new(Quantity::Snr, vec![0.1]);
        spec.steps = 1;
        assert!(spec.to_csv().is_err());
        spec.steps = 5;
        spec.start = 1.0;
        spec.stop = 1.0;
        assert!(spec.validate().is_err());
        spec.stop = 2.0;
        spec.n = 0;
        assert!(spec.validate().is_err());
        spec.n = 1;
        spec.chi_list.clear();
        assert!(spec.validate().is_err());
        spec.chi_list.push(f64::NAN);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn header_and_rows() {
        let mut spec = SweepSpec::new(Quantity::ConditionalProb, vec![0.1, PI]);
        spec.steps = 3;
        let csv = spec.to_csv().unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "detuning_rad,chi=0.1,chi=3.14159265359");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("3.14159265359,0.999375"));
        assert!(lines[2].ends_with(",0.5"));
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn singular_points_are_na() {
        let mut spec = SweepSpec::new(Quantity::WeakValue, vec![0.0]);
        spec.raw_theta = true;
        assert_eq!(spec.evaluate(PI, 0.0), None);
        spec.quantity = Quantity::Snr;
        spec.raw_theta = false;
        assert_eq!(spec.evaluate(PI, 0.0), None);
        assert_eq!(spec.evaluate(0.0, 0.0), Some(0.0));
        spec.quantity = Quantity::Fisher;
        assert_eq!(spec.evaluate(PI, 0.0), None);
    }

    #[test]
    fn phi_geometric_gives_pi_at_out_of_phase() {
        let mut spec = SweepSpec::preset(Preset::Fig4);
        spec.phi_geometric = true;
        for chi in [0.05, 0.1, 1.0] {
            assert!((spec.evaluate(PI, chi).unwrap() - PI).abs() < 1e-9);
        }
    }
}
