//! Joint state of the signal photon (interferometer A) and the idler photon
//! (interferometer B), and the circuit elements that act on it.
//!
//! Each photon is a path qubit with basis `{|x>, |y>}`. The joint state is
//! stored over the ordered basis
//!
//! | index | A | B |
//! |-------|---|---|
//! | 0     | x | x |
//! | 1     | x | y |
//! | 2     | y | x |
//! | 3     | y | y |
//!
//! Conventions, fixed so that [`evolve`] reproduces the closed-form output
//! coefficients (see [`crate::analytics::output_coefficients`]) up to a global
//! sign:
//!
//! * every balanced splitter maps `|x> -> (|x> + |y>)/√2` and
//!   `|y> -> (|y> - |x>)/√2`;
//! * `φ` is applied to arm `y` of A and `ϑ` to arm `x` of B;
//! * the Kerr medium multiplies the `A:x, B:y` component by `e^{+iχ}`.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

use libm::{cos, sin, sqrt};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ZERO_PROBABILITY;

pub type ComplexAmp = Complex64;

/// Tolerance on `Σ|a|² = 1` for inputs to checked circuit elements.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[inline]
pub(crate) fn cis(angle: f64) -> ComplexAmp {
    ComplexAmp::new(cos(angle), sin(angle))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interferometer {
    A,
    B,
}

impl Interferometer {
    fn slot(self) -> usize {
        match self {
            Interferometer::A => 0,
            Interferometer::B => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Interferometer::A => Interferometer::B,
            Interferometer::B => Interferometer::A,
        }
    }
}

/// Path of a photon inside an interferometer, or equivalently the output port
/// (detector) it leaves through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arm {
    X,
    Y,
}

impl Arm {
    fn bit(self) -> usize {
        match self {
            Arm::X => 0,
            Arm::Y => 1,
        }
    }
}

/// Position of a photon along its interferometer: before the first splitter,
/// between the splitters, or after the second one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Initial,
    Intermediate,
    Final,
}

impl Stage {
    fn from_splitters(count: u8) -> Self {
        match count {
            0 => Stage::Initial,
            1 => Stage::Intermediate,
            _ => Stage::Final,
        }
    }
}

/// Basis index of the joint component with A in `a` and B in `b`.
#[inline]
pub fn basis_index(a: Arm, b: Arm) -> usize {
    2 * a.bit() + b.bit()
}

fn arm_of(index: usize, which: Interferometer) -> Arm {
    let bit = match which {
        Interferometer::A => index >> 1,
        Interferometer::B => index & 1,
    };
    if bit == 0 {
        Arm::X
    } else {
        Arm::Y
    }
}

/// The three angles, in radians, that define one configuration of the setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    /// Controlled phase on the reference arm `y` of A.
    pub phi: f64,
    /// Controlled phase on the reference arm `x` of B.
    pub vartheta: f64,
    /// Cross-Kerr phase `χ = κt`.
    pub chi: f64,
}

impl CircuitParams {
    pub const fn new(phi: f64, vartheta: f64, chi: f64) -> Self {
        CircuitParams { phi, vartheta, chi }
    }

    /// Setting that postselects the rarest B event and switches A by `π`:
    /// `φ = θ_g`, `ϑ = π + θ_g` with `θ_g = χ/2`.
    pub fn out_of_phase(chi: f64) -> Self {
        let theta_g = chi / 2.0;
        CircuitParams::new(theta_g, PI + theta_g, chi)
    }

    /// Build from the detuning `ϑ - θ_g` used on the figure axes.
    pub fn from_detuning(phi: f64, detuning: f64, chi: f64) -> Self {
        CircuitParams::new(phi, detuning + chi / 2.0, chi)
    }

    pub fn detuning(&self) -> f64 {
        self.vartheta - self.chi / 2.0
    }

    pub fn is_finite(&self) -> bool {
        self.phi.is_finite() && self.vartheta.is_finite() && self.chi.is_finite()
    }

    /// `false` when `χ` lies outside `[0, π]`. Such values are still accepted;
    /// callers surface this as a warning.
    pub fn chi_in_range(&self) -> bool {
        (0.0..=PI).contains(&self.chi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState {
    amps: [ComplexAmp; 4],
    splitters: [u8; 2],
}

impl JointState {
    /// Build a state from raw amplitudes. The stage of both interferometers is
    /// set to `stage`. No normalization is performed.
    pub fn from_amplitudes(amps: [ComplexAmp; 4], stage: Stage) -> Self {
        let count = match stage {
            Stage::Initial => 0,
            Stage::Intermediate => 1,
            Stage::Final => 2,
        };
        JointState {
            amps,
            splitters: [count; 2],
        }
    }

    /// `|y>_A |x>_B`, one photon entering each interferometer.
    pub fn input() -> Self {
        let mut amps = [ComplexAmp::new(0.0, 0.0); 4];
        amps[basis_index(Arm::Y, Arm::X)] = ComplexAmp::new(1.0, 0.0);
        JointState {
            amps,
            splitters: [0, 0],
        }
    }

    pub fn amplitudes(&self) -> &[ComplexAmp; 4] {
        &self.amps
    }

    pub fn amplitude(&self, a: Arm, b: Arm) -> ComplexAmp {
        self.amps[basis_index(a, b)]
    }

    /// The least advanced of the two interferometers' stages.
    pub fn stage(&self) -> Stage {
        Stage::from_splitters(self.splitters[0].min(self.splitters[1]))
    }

    pub fn stage_of(&self, which: Interferometer) -> Stage {
        Stage::from_splitters(self.splitters[which.slot()])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    fn check_normalized(&self) -> Result<()> {
        let norm_sq = self.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE || !norm_sq.is_finite() {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(())
    }

    fn require_stage(&self, which: Interferometer, expected: Stage) -> Result<()> {
        let found = self.stage_of(which);
        if found != expected {
            return Err(Error::StageMismatch { expected, found });
        }
        Ok(())
    }

    fn split(&mut self, which: Interferometer) {
        for (x_idx, y_idx) in pair_indices(which) {
            let cx = self.amps[x_idx];
            let cy = self.amps[y_idx];
            self.amps[x_idx] = (cx - cy) * FRAC_1_SQRT_2;
            self.amps[y_idx] = (cx + cy) * FRAC_1_SQRT_2;
        }
        self.splitters[which.slot()] += 1;
    }

    fn shift(&mut self, which: Interferometer, arm: Arm, angle: f64) {
        let phase = cis(angle);
        for (k, amp) in self.amps.iter_mut().enumerate() {
            if arm_of(k, which) == arm {
                *amp *= phase;
            }
        }
    }

    fn kerr(&mut self, chi: f64) {
        self.amps[basis_index(Arm::X, Arm::Y)] *= cis(chi);
    }

    /// Pass the photon of `which` through its next balanced splitter.
    pub fn apply_beam_splitter(&self, which: Interferometer) -> Result<Self> {
        self.check_normalized()?;
        if self.stage_of(which) == Stage::Final {
            return Err(Error::StageMismatch {
                expected: Stage::Intermediate,
                found: Stage::Final,
            });
        }
        let mut out = *self;
        out.split(which);
        Ok(out)
    }

    /// Multiply every component with the photon of `which` in `arm` by
    /// `e^{i·angle}`. Only valid between the splitters.
    pub fn apply_phase_shift(&self, which: Interferometer, arm: Arm, angle: f64) -> Result<Self> {
        self.require_stage(which, Stage::Intermediate)?;
        let mut out = *self;
        out.shift(which, arm, angle);
        Ok(out)
    }

    /// Cross-Kerr coupling between arm `x` of A and arm `y` of B.
    pub fn apply_kerr(&self, chi: f64) -> Result<Self> {
        self.require_stage(Interferometer::A, Stage::Intermediate)?;
        self.require_stage(Interferometer::B, Stage::Intermediate)?;
        let mut out = *self;
        out.kerr(chi);
        Ok(out)
    }

    /// Born probabilities over the joint basis.
    pub fn joint_probabilities(&self) -> [f64; 4] {
        self.amps.map(|a| a.norm_sqr())
    }

    /// `(P_x, P_y)` for the photon of `which`, the other one traced out.
    pub fn marginal_probabilities(&self, which: Interferometer) -> (f64, f64) {
        let probs = self.joint_probabilities();
        let mut px = 0.0;
        let mut py = 0.0;
        for (k, p) in probs.iter().enumerate() {
            match arm_of(k, which) {
                Arm::X => px += p,
                Arm::Y => py += p,
            }
        }
        (px, py)
    }

    /// Project the photon of `which` onto `port` and return the renormalized
    /// state of the other photon.
    pub fn postselect(&self, which: Interferometer, port: Arm) -> Result<ConditionalState> {
        self.require_stage(Interferometer::A, Stage::Final)?;
        self.require_stage(Interferometer::B, Stage::Final)?;
        let (px, py) = self.marginal_probabilities(which);
        let probability = match port {
            Arm::X => px,
            Arm::Y => py,
        };
        if probability.is_nan() || probability <= ZERO_PROBABILITY {
            return Err(Error::ZeroProbabilityPostselection { probability });
        }
        let kept = |arm: Arm| match which {
            Interferometer::A => self.amplitude(port, arm),
            Interferometer::B => self.amplitude(arm, port),
        };
        let scale = 1.0 / sqrt(probability);
        Ok(ConditionalState {
            amps: [kept(Arm::X) * scale, kept(Arm::Y) * scale],
            postselection_prob: probability,
            postselected_on: which,
            port,
        })
    }

    /// `|<self|other>|`, insensitive to global phase.
    pub fn fidelity(&self, other: &JointState) -> f64 {
        let overlap: ComplexAmp = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        sqrt(overlap.norm_sqr()).min(1.0)
    }

    /// Pure-state concurrence `2|a₀a₃ − a₁a₂|`.
    pub fn concurrence(&self) -> f64 {
        let [a0, a1, a2, a3] = self.amps;
        let c = 2.0 * sqrt((a0 * a3 - a1 * a2).norm_sqr());
        c.min(1.0)
    }
}

fn pair_indices(which: Interferometer) -> [(usize, usize); 2] {
    match which {
        Interferometer::A => [
            (basis_index(Arm::X, Arm::X), basis_index(Arm::Y, Arm::X)),
            (basis_index(Arm::X, Arm::Y), basis_index(Arm::Y, Arm::Y)),
        ],
        Interferometer::B => [
            (basis_index(Arm::X, Arm::X), basis_index(Arm::X, Arm::Y)),
            (basis_index(Arm::Y, Arm::X), basis_index(Arm::Y, Arm::Y)),
        ],
    }
}

/// Run the full circuit: splitters, controlled phases, Kerr coupling,
/// splitters.
pub fn evolve(p: &CircuitParams) -> JointState {
    let mut s = JointState::input();
    s.split(Interferometer::A);
    s.split(Interferometer::B);
    s.shift(Interferometer::A, Arm::Y, p.phi);
    s.shift(Interferometer::B, Arm::X, p.vartheta);
    s.kerr(p.chi);
    s.split(Interferometer::A);
    s.split(Interferometer::B);
    s
}

/// State of one photon after its partner was postselected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalState {
    /// Amplitudes over `{|x>, |y>}` of the photon that was not measured.
    pub amps: [ComplexAmp; 2],
    pub postselection_prob: f64,
    pub postselected_on: Interferometer,
    pub port: Arm,
}

impl ConditionalState {
    /// `(P̃_x, P̃_y)` of the remaining photon.
    pub fn probabilities(&self) -> (f64, f64) {
        (self.amps[0].norm_sqr(), self.amps[1].norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> ComplexAmp {
        ComplexAmp::new(re, im)
    }

    fn intermediate() -> JointState {
        JointState::input()
            .apply_beam_splitter(Interferometer::A)
            .unwrap()
            .apply_beam_splitter(Interferometer::B)
            .unwrap()
    }

    #[test]
    fn input_is_y_a_x_b() {
        let s = JointState::input();
        assert_eq!(s.joint_probabilities(), [0.0, 0.0, 1.0, 0.0]);
        assert_eq!(s.norm_sqr(), 1.0);
        assert_eq!(s.stage(), Stage::Initial);
    }

    #[test]
    fn splitter_on_a_makes_superposition() {
        let s = JointState::input().apply_beam_splitter(Interferometer::A).unwrap();
        let expected = JointState::from_amplitudes(
            [c(-FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)],
            Stage::Intermediate,
        );
        assert!((s.fidelity(&expected) - 1.0).abs() < 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(s.stage_of(Interferometer::A), Stage::Intermediate);
        assert_eq!(s.stage_of(Interferometer::B), Stage::Initial);
        assert_eq!(s.stage(), Stage::Initial);
    }

    #[test]
    fn third_splitter_is_rejected() {
        let s = evolve(&CircuitParams::new(0.3, 0.2, 0.1));
        assert!(matches!(
            s.apply_beam_splitter(Interferometer::A),
            Err(Error::StageMismatch { found: Stage::Final, .. })
        ));
    }

    #[test]
    fn splitter_rejects_unnormalized_input() {
        let s = JointState::from_amplitudes([c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], Stage::Initial);
        assert!(matches!(
            s.apply_beam_splitter(Interferometer::B),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn phase_shift_identities() {
        let s = intermediate();
        assert_eq!(s.apply_phase_shift(Interferometer::A, Arm::Y, 0.0).unwrap(), s);
        let full = s.apply_phase_shift(Interferometer::B, Arm::X, TAU).unwrap();
        for (a, b) in full.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a - b).norm_sqr() < 1e-24);
        }
    }

    #[test]
    fn phase_shift_on_single_component() {
        let s = JointState::from_amplitudes([c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], Stage::Intermediate);
        let theta = 0.7;
        let out = s.apply_phase_shift(Interferometer::B, Arm::X, theta).unwrap();
        assert!((out.amplitude(Arm::Y, Arm::X) - cis(theta)).norm_sqr() < 1e-30);
        let untouched = s.apply_phase_shift(Interferometer::B, Arm::Y, theta).unwrap();
        assert_eq!(untouched, s);
    }

    #[test]
    fn phase_shift_requires_intermediate_stage() {
        assert!(matches!(
            JointState::input().apply_phase_shift(Interferometer::A, Arm::Y, 1.0),
            Err(Error::StageMismatch { expected: Stage::Intermediate, found: Stage::Initial })
        ));
        let s = evolve(&CircuitParams::new(0.0, 0.0, 0.0));
        assert!(s.apply_phase_shift(Interferometer::B, Arm::X, 1.0).is_err());
    }

    #[test]
    fn kerr_acts_on_ax_by_only() {
        let s = JointState::from_amplitudes([c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], Stage::Intermediate);
        let out = s.apply_kerr(PI).unwrap();
        assert!((out.amplitude(Arm::X, Arm::Y) - c(-1.0, 0.0)).norm_sqr() < 1e-30);
        let s = intermediate();
        assert_eq!(s.apply_kerr(0.0).unwrap(), s);
        let probs = s.apply_kerr(1.234).unwrap().joint_probabilities();
        for (a, b) in probs.iter().zip(s.joint_probabilities()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn kerr_requires_both_between_splitters() {
        let half = JointState::input().apply_beam_splitter(Interferometer::A).unwrap();
        assert!(matches!(half.apply_kerr(0.1), Err(Error::StageMismatch { .. })));
    }

    #[test]
    fn evolve_at_zero_is_x_a_y_b() {
        let s = evolve(&CircuitParams::new(0.0, 0.0, 0.0));
        let target = JointState::from_amplitudes([c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], Stage::Final);
        assert!((s.fidelity(&target) - 1.0).abs() < 1e-12);
        assert_eq!(s.stage(), Stage::Final);
    }

    #[test]
    fn evolve_at_chi_pi_is_uniform() {
        let s = evolve(&CircuitParams::new(0.0, 0.0, PI));
        for p in s.joint_probabilities() {
            assert!((p - 0.25).abs() < 1e-12);
        }
        let (ax, ay) = s.marginal_probabilities(Interferometer::A);
        assert!((ax - 0.5).abs() < 1e-12 && (ay - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uniform_state_probabilities() {
        let s = JointState::from_amplitudes([c(0.5, 0.0); 4], Stage::Final);
        assert_eq!(s.joint_probabilities(), [0.25; 4]);
    }

    #[test]
    fn b_marginal_at_zero_detuning() {
        let chi = 0.1;
        let s = evolve(&CircuitParams::new(0.0, chi / 2.0, chi));
        let (_, py) = s.marginal_probabilities(Interferometer::B);
        assert!((py - 0.5 * (1.0 + cos(0.05))).abs() < 1e-12);
        assert!((py - 0.999375).abs() < 1e-6);
    }

    #[test]
    fn a_marginal_without_kerr() {
        for k in 0..20 {
            let phi = k as f64 * 0.31;
            let (ax, _) = evolve(&CircuitParams::new(phi, 1.1, 0.0)).marginal_probabilities(Interferometer::A);
            assert!((ax - 0.5 * (1.0 + cos(phi))).abs() < 1e-12);
        }
    }

    #[test]
    fn postselect_out_of_phase_switches_a_to_y() {
        let s = evolve(&CircuitParams::out_of_phase(0.1));
        let cond = s.postselect(Interferometer::B, Arm::Y).unwrap();
        let (_, py) = cond.probabilities();
        assert!((py - 1.0).abs() < 1e-9);
        let expected = sin(0.025) * sin(0.025);
        assert!((cond.postselection_prob - expected).abs() < 1e-12);
        assert!((cond.postselection_prob - 6.2487e-4).abs() < 1e-8);
        assert_eq!(cond.postselected_on, Interferometer::B);
        assert_eq!(cond.port, Arm::Y);
    }

    #[test]
    fn postselect_at_zero_parameters() {
        let s = evolve(&CircuitParams::new(0.0, 0.0, 0.0));
        let cond = s.postselect(Interferometer::B, Arm::Y).unwrap();
        let (px, _) = cond.probabilities();
        assert!((px - 1.0).abs() < 1e-12);
        assert!((cond.postselection_prob - 1.0).abs() < 1e-12);
        assert!(matches!(
            s.postselect(Interferometer::B, Arm::X),
            Err(Error::ZeroProbabilityPostselection { .. })
        ));
    }

    #[test]
    fn postselect_degenerate_point() {
        let s = evolve(&CircuitParams::new(0.0, PI, 0.0));
        assert!(matches!(
            s.postselect(Interferometer::B, Arm::Y),
            Err(Error::ZeroProbabilityPostselection { .. })
        ));
    }

    #[test]
    fn postselect_requires_final_stage() {
        assert!(matches!(
            intermediate().postselect(Interferometer::B, Arm::Y),
            Err(Error::StageMismatch { expected: Stage::Final, .. })
        ));
    }

    #[test]
    fn postselect_on_a() {
        let s = evolve(&CircuitParams::new(0.4, 1.3, 0.7));
        let cond = s.postselect(Interferometer::A, Arm::X).unwrap();
        let (px, _) = s.marginal_probabilities(Interferometer::A);
        assert!((cond.postselection_prob - px).abs() < 1e-15);
        let (qx, qy) = cond.probabilities();
        assert!((qx + qy - 1.0).abs() < 1e-12);
        let p_xx = s.joint_probabilities()[basis_index(Arm::X, Arm::X)];
        assert!((qx - p_xx / px).abs() < 1e-12);
    }

    #[test]
    fn fidelity_cases() {
        let s = evolve(&CircuitParams::new(0.3, 1.7, 0.4));
        assert!((s.fidelity(&s) - 1.0).abs() < 1e-12);
        let rotated = JointState::from_amplitudes(s.amplitudes().map(|a| a * cis(PI / 3.0)), Stage::Final);
        assert!((s.fidelity(&rotated) - 1.0).abs() < 1e-12);
        let xx = JointState::from_amplitudes([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], Stage::Final);
        let yy = JointState::from_amplitudes([c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], Stage::Final);
        assert_eq!(xx.fidelity(&yy), 0.0);
    }

    #[test]
    fn concurrence_cases() {
        let maximal = evolve(&CircuitParams::out_of_phase(PI));
        assert!((maximal.concurrence() - 1.0).abs() < 1e-12);
        let tiny = evolve(&CircuitParams::out_of_phase(1e-9));
        assert!(tiny.concurrence() < 1e-8);
        let weak = evolve(&CircuitParams::out_of_phase(0.1));
        assert!((weak.concurrence() - 2.0 * cos(0.025) * sin(0.025)).abs() < 1e-12);
        assert!((weak.concurrence() - 0.049979).abs() < 1e-6);
    }

    #[test]
    fn chi_range_flag() {
        assert!(CircuitParams::new(0.0, 0.0, 0.5).chi_in_range());
        assert!(!CircuitParams::new(0.0, 0.0, 4.0).chi_in_range());
        assert!(!CircuitParams::new(0.0, 0.0, -0.1).chi_in_range());
        let p = CircuitParams::from_detuning(0.0, PI, 0.1);
        assert!((p.detuning() - PI).abs() < 1e-15);
    }
}
