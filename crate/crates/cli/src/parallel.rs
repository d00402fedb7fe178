use anyhow::Result;
use kerr_mzi_core::montecarlo::{chunk_count, chunk_len, count_chunk, CountsRecord, OutcomeSampler};
use kerr_mzi_core::CircuitParams;
use rayon::prelude::*;

/// Chunked run on a rayon pool. Produces exactly the counts of
/// [`kerr_mzi_core::montecarlo::run_experiment`]; chunk streams depend only on
/// `(seed, chunk)` and the merge is integer addition.
///
/// `threads = None` uses the global pool.
pub fn run_experiment_parallel(params: &CircuitParams, n_trials: u64, seed: u64, threads: Option<usize>) -> Result<CountsRecord> {
    let run = || {
        let sampler = OutcomeSampler::new(params);
        let totals = (0..chunk_count(n_trials))
            .into_par_iter()
            .map(|chunk| count_chunk(&sampler, seed, chunk, chunk_len(n_trials, chunk)))
            .reduce(|| [0u64; 4], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]);
        let mut record = CountsRecord::empty(*params, seed);
        record.absorb(totals);
        record
    };
    match threads {
        None => Ok(run()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(run))
        }
    }
}
