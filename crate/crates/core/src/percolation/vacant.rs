//! Monte Carlo estimate of the uncovered area fraction of a window.

use super::grid::GrainIndex;
use crate::error::{invalid, Result};
use crate::geometry::{disc_contains_point, Rect};
use crate::model::{Grain, RngStream};
use crate::stats::BernoulliEstimate;

/// Fraction of `n_probe` uniform points of `window` outside every grain.
pub fn vacant_fraction(
    window: &Rect,
    grains: &[Grain],
    n_probe: u64,
    stream: &RngStream,
) -> Result<BernoulliEstimate> {
    if n_probe == 0 {
        return Err(invalid("n_probe", "need at least one probe"));
    }
    let index = GrainIndex::build(grains, window.long_side() / 256.0);
    let mut rng = stream.rng();
    let mut vacant = 0;
    for _ in 0..n_probe {
        let p = window.sample_uniform(&mut rng);
        let mut covered = false;
        index.for_each_near_point(p, |i| covered |= disc_contains_point(&grains[i], p));
        if !covered {
            vacant += 1;
        }
    }
    Ok(BernoulliEstimate::new(vacant, n_probe, *stream))
}
