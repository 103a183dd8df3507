//! Threshold and cluster-size estimators.

pub mod bisection;
pub mod coverage;
pub mod crossing;
pub mod e_event;
pub mod lambda_d;

pub use bisection::{bisect, BisectionSettings, Bracket, Probe, ProbeDecision};
pub use coverage::{coverage_profile, CoverageRow};
pub use crossing::{
    crossing_prob_sweep, crossing_probability, estimate_threshold, probe_reach, ScaleBracket,
    SweepRow, ThresholdConfig, ThresholdEstimate,
};
pub use e_event::{estimate_e_event, EEventReport};
pub use lambda_d::{
    censoring_bracket, cluster_diameter, estimate_lambda_d, CensoringBracket, DiameterSample,
    LambdaDEstimate,
};

use crate::error::{require_positive, Result};
use crate::model::{Grain, GrainSet};

/// Multiplies every radius by `s`, keeping centres (and zero radii).
pub fn grain_scaling(grains: &GrainSet, s: f64) -> Result<GrainSet> {
    require_positive("s", s)?;
    Ok(GrainSet {
        grains: grains
            .grains
            .iter()
            .map(|g| Grain::new(g.center, g.radius * s))
            .collect(),
        ..grains.clone()
    })
}
