use thiserror::Error;

use crate::state::Stage;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("state is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("operation requires stage {expected:?}, state is at {found:?}")]
    StageMismatch { expected: Stage, found: Stage },

    #[error("postselected port has probability {probability:e}")]
    ZeroProbabilityPostselection { probability: f64 },

    #[error("conditional probability denominator vanishes ({denominator:e})")]
    DegenerateConditional { denominator: f64 },

    #[error("weak value diverges at vartheta = {vartheta}")]
    WeakValueDivergence { vartheta: f64 },

    #[error("arccos argument {value} is outside [-1, 1] beyond rounding tolerance")]
    ArccosOutOfRange { value: f64 },

    #[error("domain error: {0}")]
    DomainError(&'static str),

    #[error("Fisher information is singular")]
    SingularFisher,

    #[error("signal-to-noise ratio is unbounded (P_Ax = {p_ax:e})")]
    InfiniteSnr { p_ax: f64 },

    #[error("no postselected events")]
    EmptySample,

    #[error("sample is degenerate (p_hat = {p_hat})")]
    DegenerateSample { p_hat: f64 },
}
