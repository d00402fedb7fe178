//! Closed-form expressions for the detection statistics of the coupled
//! interferometers. These serve as the independent check on [`crate::state`]
//! and feed the figure sweeps.

use core::f64::consts::PI;

use libm::{acos, atan2, cos, sin, sqrt};

use crate::error::{Error, Result};
use crate::state::{cis, evolve, Arm, CircuitParams, ComplexAmp, Interferometer, JointState, Stage};
use crate::ZERO_PROBABILITY;

/// How far outside `[-1, 1]` an arccos argument may drift from rounding
/// before it is reported as an error instead of clamped.
pub const ARCCOS_TOLERANCE: f64 = 1e-9;

/// Output coefficients `(α, β, γ, δ)`; the final state is
/// `¼(α|xx> + β|xy> + γ|yx> + δ|yy>)`.
pub fn output_coefficients(p: &CircuitParams) -> [ComplexAmp; 4] {
    let t = cis(p.vartheta);
    let k = cis(p.chi);
    let tp = cis(p.vartheta + p.phi);
    let f = cis(p.phi);
    [t - k + tp - f, t + k + tp + f, t - k - tp + f, t + k - tp - f]
}

/// Fringe visibility `ν = cos(χ/2)`.
pub fn visibility(chi: f64) -> f64 {
    cos(chi / 2.0)
}

/// Geometric phase `θ_g = χ/2`, the shift of the fringe pattern.
pub fn geometric_phase(chi: f64) -> f64 {
    chi / 2.0
}

/// Unconditioned port probabilities of one interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardProbs {
    pub p_x: f64,
    pub p_y: f64,
    pub visibility: f64,
    pub geometric_phase: f64,
}

/// Port probabilities of B with every run counted.
pub fn standard_probs_b(vartheta: f64, chi: f64) -> StandardProbs {
    let nu = visibility(chi);
    let theta_g = geometric_phase(chi);
    let fringe = nu * cos(vartheta - theta_g);
    StandardProbs {
        p_x: 0.5 * (1.0 - fringe),
        p_y: 0.5 * (1.0 + fringe),
        visibility: nu,
        geometric_phase: theta_g,
    }
}

/// Port probabilities of A with every run counted. Independent of `ϑ`.
pub fn standard_probs_a(phi: f64, chi: f64) -> StandardProbs {
    let nu = visibility(chi);
    let theta_g = geometric_phase(chi);
    let fringe = nu * cos(phi - theta_g);
    StandardProbs {
        p_x: 0.5 * (1.0 + fringe),
        p_y: 0.5 * (1.0 - fringe),
        visibility: nu,
        geometric_phase: theta_g,
    }
}

/// `(P̃_Ax, P̃_Ay)` after postselecting B on `y`, for `φ = 0`.
///
/// `P̃_Ay = sin²θ_g / (2 + 2ν cos(ϑ − θ_g))`. Both the denominator and `P̃_Ax`
/// are evaluated as sums of squares so that the dark-port value near
/// `ϑ − θ_g = π` keeps full relative precision.
pub fn conditional_probs_a(vartheta: f64, chi: f64) -> Result<(f64, f64)> {
    let theta_g = geometric_phase(chi);
    let detuning = vartheta - theta_g;
    // 1 + cos a cos b = cos²((a+b)/2) + cos²((a-b)/2)
    let cu = cos((theta_g + detuning) / 2.0);
    let cv = cos((theta_g - detuning) / 2.0);
    let denominator = 2.0 * (cu * cu + cv * cv);
    if denominator.is_nan() || denominator <= ZERO_PROBABILITY {
        return Err(Error::DegenerateConditional { denominator });
    }
    let s = sin(theta_g);
    let sd = sin(detuning);
    // (cos θ_g + cos d)² + sin² d = D − sin² θ_g
    let p_x = (4.0 * cu * cu * cv * cv + sd * sd) / denominator;
    Ok((p_x, s * s / denominator))
}

/// `arccos` that absorbs rounding drift up to [`ARCCOS_TOLERANCE`] past the
/// domain edges.
pub fn arccos_clamped(value: f64) -> Result<f64> {
    if value.is_nan() || value.abs() > 1.0 + ARCCOS_TOLERANCE {
        return Err(Error::ArccosOutOfRange { value });
    }
    Ok(acos(value.clamp(-1.0, 1.0)))
}

/// Phase `Θ = arccos(P̃_Ax − P̃_Ay)` read off A after postselecting B on `y`.
/// Evaluated through the state engine, so any `φ` is allowed.
///
/// The arccos argument is range-checked, but the angle itself is returned as
/// `2·atan2(|a_y|, |a_x|)`, which equals the arccos for a normalized state and
/// stays accurate where arccos loses half its digits (near `Θ = 0, π`).
pub fn inferred_phase(p: &CircuitParams) -> Result<f64> {
    let conditional = evolve(p).postselect(Interferometer::B, Arm::Y)?;
    let (p_x, p_y) = conditional.probabilities();
    arccos_clamped(p_x - p_y)?;
    Ok(2.0 * atan2(sqrt(p_y), sqrt(p_x)))
}

/// Weak value of the photon number in the probe arm of B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValue {
    pub value: ComplexAmp,
}

impl WeakValue {
    /// Weak value of the photon number in the reference arm, `1 − value`.
    pub fn reference_arm(&self) -> ComplexAmp {
        ComplexAmp::new(1.0, 0.0) - self.value
    }
}

/// `⟨n_By⟩_w = 1/(1 + e^{iϑ})`. Diverges at `ϑ = π`, which is reported as an
/// error.
pub fn weak_value(vartheta: f64) -> Result<WeakValue> {
    let denominator = ComplexAmp::new(1.0, 0.0) + cis(vartheta);
    if denominator.norm_sqr() <= ZERO_PROBABILITY * ZERO_PROBABILITY {
        return Err(Error::WeakValueDivergence { vartheta });
    }
    Ok(WeakValue {
        value: denominator.inv(),
    })
}

/// `|<y|x>|²`-style postselection probability that ignores the interaction:
/// `½(1 + cos ϑ)`.
pub fn naive_postselection_prob(vartheta: f64) -> f64 {
    0.5 * (1.0 + cos(vartheta))
}

/// `−e^{i3χ/4}[cos(χ/4)|xx> − i sin(χ/4)|yy>]`, the output at the
/// out-of-phase setting.
pub fn purified_state(chi: f64) -> JointState {
    let global = -cis(3.0 * chi / 4.0);
    let q = chi / 4.0;
    JointState::from_amplitudes(
        [
            global * cos(q),
            ComplexAmp::new(0.0, 0.0),
            ComplexAmp::new(0.0, 0.0),
            global * ComplexAmp::new(0.0, -sin(q)),
        ],
        Stage::Final,
    )
}

/// Detuning `ϑ − θ_g` at which B interferes out of phase.
pub const OUT_OF_PHASE_DETUNING: f64 = PI;
