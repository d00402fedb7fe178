//! Exact simulation of two single-photon Mach-Zehnder interferometers (A and B)
//! coupled by a cross-Kerr medium, with postselection on an output port of B.
//!
//! The crate is `no_std` and allocation free. It provides:
//!
//! * [`state`]: the four-amplitude joint state, the circuit elements, and
//!   projective postselection.
//! * [`analytics`]: closed-form detection probabilities, conditional
//!   probabilities, inferred phase, weak value and the purified state.
//! * [`estimation`]: binomial likelihood, maximum-likelihood estimates,
//!   Fisher information, Cramér-Rao bound and signal-to-noise ratio.
//! * [`montecarlo`]: seeded, chunked sampling of detector clicks whose output
//!   does not depend on how the chunks are scheduled.
#![no_std]

pub mod analytics;
pub mod error;
pub mod estimation;
pub mod montecarlo;
pub mod state;

pub use error::{Error, Result};
pub use state::{Arm, CircuitParams, ComplexAmp, ConditionalState, Interferometer, JointState, Stage};

/// Threshold below which a postselection probability is treated as zero.
pub const ZERO_PROBABILITY: f64 = 1e-15;
