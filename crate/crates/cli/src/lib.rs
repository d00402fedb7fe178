//! Command implementations behind the `kerr-mzi` binary: figure sweeps as
//! CSV, Monte-Carlo runs, and sensitivity reports.

pub mod estimate;
pub mod format;
pub mod output;
pub mod parallel;
pub mod simulate;
pub mod sweep;

pub use parallel::run_experiment_parallel;
