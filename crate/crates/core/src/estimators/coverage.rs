//! Uncovered fraction of a window as the sampling reach grows.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Result};
use crate::geometry::{Rect, Region};
use crate::model::{sample_reaching_grains, RadiusLaw, RngStream};
use crate::percolation::vacant_fraction;
use crate::replicates;
use crate::stats::MeanEstimate;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub reach: f64,
    /// Mean grains per replicate reaching the window.
    pub grains: f64,
    pub vacant: MeanEstimate,
}

/// Vacant fraction of `window` when only grains centred within `reach` of
/// it are kept, for each reach in turn. Replicate `i` uses the same stream
/// at every reach.
pub fn coverage_profile(
    lambda: f64,
    law: &RadiusLaw,
    window: &Rect,
    reaches: &[f64],
    n_reps: u64,
    n_probe: u64,
    stream: &RngStream,
) -> Result<Vec<CoverageRow>> {
    require_positive("lambda", lambda)?;
    reaches
        .iter()
        .map(|&reach| {
            let region = Region::neighborhood(*window, reach)?;
            let rows = replicates::collect(n_reps, stream, |r| {
                let grains = sample_reaching_grains(&region, window, lambda, law, r)?;
                let v = vacant_fraction(window, &grains.grains, n_probe, &r.substream("probe", 0))?;
                Ok((grains.len() as f64, v.point))
            })?;
            let vac: Vec<f64> = rows.iter().map(|r| r.1).collect();
            Ok(CoverageRow {
                reach,
                grains: rows.iter().map(|r| r.0).sum::<f64>() / rows.len() as f64,
                vacant: MeanEstimate::from_samples(&vac),
            })
        })
        .collect()
}
