//! Replicate-parallel Monte Carlo. Replicate `i` always draws from
//! `stream.replicate(i)`, so results do not depend on scheduling.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::model::RngStream;
use crate::stats::BernoulliEstimate;

fn require_reps(n_reps: u64) -> Result<()> {
    if n_reps == 0 {
        Err(invalid("n_reps", "need at least one replicate"))
    } else {
        Ok(())
    }
}

/// Runs `trial` on `n_reps` replicates and counts successes.
pub fn bernoulli<F>(n_reps: u64, stream: &RngStream, trial: F) -> Result<BernoulliEstimate>
where
    F: Fn(&RngStream) -> Result<bool> + Sync,
{
    require_reps(n_reps)?;
    let successes = (0..n_reps)
        .into_par_iter()
        .map(|i| trial(&stream.replicate(i)).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(BernoulliEstimate::new(successes, n_reps, *stream))
}

/// Runs `f` on `n_reps` replicates, returning results in replicate order.
pub fn collect<T, F>(n_reps: u64, stream: &RngStream, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&RngStream) -> Result<T> + Sync,
{
    require_reps(n_reps)?;
    (0..n_reps)
        .into_par_iter()
        .map(|i| f(&stream.replicate(i)))
        .collect()
}
