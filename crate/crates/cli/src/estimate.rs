//! Sensitivity report for a pair source running at the out-of-phase point.

use std::f64::consts::PI;

use anyhow::Result;
use kerr_mzi_core::analytics::{geometric_phase, standard_probs_b};
use kerr_mzi_core::estimation::{
    crb_phase_uncertainty, crb_small_chi, displacement_sensitivity, fisher_from_rate, mean_runs_per_postselection,
    self_information_bits, snr_at_optimum,
};

use crate::format;

pub const DEFAULT_WAVELENGTH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateSpec {
    /// Pair rate `Γ` in s⁻¹.
    pub rate: f64,
    /// Integration time `τ` in s.
    pub duration: f64,
    pub chi: f64,
    /// Wavelength in m.
    pub wavelength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    pub spec: EstimateSpec,
    pub postselection_probability: f64,
    pub postselections: f64,
    pub runs_per_postselection: f64,
    pub self_information_bits: f64,
    pub fisher_exact: f64,
    pub fisher_approx: f64,
    pub delta_theta_g: f64,
    pub delta_theta_g_small_chi: f64,
    pub snr: f64,
    pub displacement: f64,
}

pub fn estimate(spec: &EstimateSpec) -> Result<EstimateReport> {
    let EstimateSpec { rate, duration, chi, wavelength } = *spec;
    let fisher = fisher_from_rate(rate, duration, chi)?;
    let vartheta = PI + geometric_phase(chi);
    let postselection_probability = standard_probs_b(vartheta, chi).p_y;
    let delta_theta_g = crb_phase_uncertainty(fisher.exact)?;
    Ok(EstimateReport {
        spec: *spec,
        postselection_probability,
        postselections: fisher.postselections,
        runs_per_postselection: mean_runs_per_postselection(chi, vartheta)?,
        self_information_bits: self_information_bits(postselection_probability)?,
        fisher_exact: fisher.exact,
        fisher_approx: fisher.approx,
        delta_theta_g,
        delta_theta_g_small_chi: crb_small_chi(fisher.postselections, chi),
        snr: snr_at_optimum(fisher.postselections, chi),
        displacement: displacement_sensitivity(delta_theta_g, wavelength)?,
    })
}

impl EstimateReport {
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("rate", self.spec.rate),
            ("duration", self.spec.duration),
            ("chi", self.spec.chi),
            ("wavelength", self.spec.wavelength),
            ("postselection_probability", self.postselection_probability),
            ("postselections", self.postselections),
            ("runs_per_postselection", self.runs_per_postselection),
            ("self_information_bits", self.self_information_bits),
            ("fisher_exact", self.fisher_exact),
            ("fisher_approx", self.fisher_approx),
            ("delta_theta_g", self.delta_theta_g),
            ("delta_theta_g_small_chi", self.delta_theta_g_small_chi),
            ("snr", self.snr),
            ("displacement_m", self.displacement),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,value\n");
        for (name, v) in self.entries() {
            out.push_str(name);
            out.push(',');
            out.push_str(&format::number(v));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(name, v)| format!("{name}: {}\n", format::number(v)))
            .collect()
    }
}
