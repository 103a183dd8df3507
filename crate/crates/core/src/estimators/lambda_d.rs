//! Mean diameter of the cluster of the unit segment `I_0`, with censoring
//! when the cluster reaches the edge of the sampling window.

use serde::{Deserialize, Serialize};

use super::bisection::{bisect, BisectionSettings, Bracket};
use crate::error::{invalid, require_positive, Result};
use crate::geometry::{Point, Rect, Region};
use crate::model::{sample_boolean, Grain, RadiusLaw, RngStream};
use crate::percolation::{seed_component, union_diameter};
use crate::replicates;
use crate::stats::{BernoulliEstimate, MeanEstimate};

/// Censoring fraction accepted as "the window is large enough".
pub const CENSOR_OK: f64 = 0.01;
/// Censoring fraction beyond which the mean is flagged unreliable.
pub const CENSOR_UNRELIABLE: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterSample {
    pub diameter: f64,
    pub censored: bool,
}

/// `D(seed ∪ cluster)` plus whether the cluster touches the edge of the
/// window `seed ⊕ radius`.
pub fn cluster_diameter(grains: &[Grain], seed: &Rect, radius: f64) -> DiameterSample {
    let members = seed_component(grains, seed);
    let censored = members
        .iter()
        .any(|&i| seed.dist(grains[i].center) + grains[i].radius >= radius);
    let mut discs: Vec<(Point, f64)> = seed.corners().iter().map(|&c| (c, 0.0)).collect();
    discs.extend(members.iter().map(|&i| (grains[i].center, grains[i].radius)));
    DiameterSample {
        diameter: union_diameter(&discs),
        censored,
    }
}

pub fn diameter_trial(lambda: f64, law: &RadiusLaw, radius: f64, stream: &RngStream) -> Result<DiameterSample> {
    let seed = Rect::unit_interval(0);
    let window = Region::neighborhood(seed, radius)?;
    let grains = sample_boolean(&window, lambda, law, stream)?;
    Ok(cluster_diameter(&grains.grains, &seed, radius))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterStage {
    pub radius: f64,
    pub censored: BernoulliEstimate,
    /// Mean over all replicates; censored ones enter as lower bounds.
    pub diameter: MeanEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaDEstimate {
    pub lambda: f64,
    pub law: RadiusLaw,
    pub n_reps: u64,
    pub stages: Vec<DiameterStage>,
    pub radius: f64,
    pub mean_diameter: MeanEstimate,
    pub censored_fraction: f64,
    /// Censoring fell to the accepted level within the doubling budget.
    pub settled: bool,
    pub unreliable: bool,
}

/// Initial window radius: a few typical radii, at least 8.
pub fn initial_radius(law: &RadiusLaw) -> f64 {
    (4.0 * law.upper_quantile(0.01)).max(8.0)
}

/// `Ê[D(W_0)]`, doubling the window radius up to `k_max` times until at
/// most 1% of replicates are censored.
pub fn estimate_lambda_d(lambda: f64, law: &RadiusLaw, k_max: u32, n_reps: u64, stream: &RngStream) -> Result<LambdaDEstimate> {
    require_positive("lambda", lambda)?;
    law.validate()?;
    let mut radius = initial_radius(law);
    let mut stages = Vec::new();
    for k in 0..=k_max {
        let samples = replicates::collect(n_reps, &stream.substream("window", k.into()), |r| {
            diameter_trial(lambda, law, radius, r)
        })?;
        let censored = samples.iter().filter(|s| s.censored).count() as u64;
        let d: Vec<f64> = samples.iter().map(|s| s.diameter).collect();
        stages.push(DiameterStage {
            radius,
            censored: BernoulliEstimate::new(censored, n_reps, *stream),
            diameter: MeanEstimate::from_samples(&d),
        });
        if censored as f64 <= CENSOR_OK * n_reps as f64 {
            break;
        }
        if k < k_max {
            radius *= 2.0;
        }
    }
    let last = stages.last().expect("at least one stage");
    let censored_fraction = last.censored.point;
    Ok(LambdaDEstimate {
        lambda,
        law: law.clone(),
        n_reps,
        radius: last.radius,
        mean_diameter: last.diameter,
        censored_fraction,
        settled: censored_fraction <= CENSOR_OK,
        unreliable: censored_fraction > CENSOR_UNRELIABLE,
        stages,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensoringBracket {
    pub law: RadiusLaw,
    pub radius: f64,
    pub level: f64,
    pub bracket: Bracket,
}

/// Bracket on the `λ` at which the censored fraction in the window
/// `I_0 ⊕ radius` reaches `level`: the finite-window proxy for the
/// blow-up of the mean cluster diameter.
pub fn censoring_bracket(
    law: &RadiusLaw,
    radius: f64,
    level: f64,
    settings: &BisectionSettings,
    stream: &RngStream,
) -> Result<CensoringBracket> {
    require_positive("radius", radius)?;
    if !(0.0..1.0).contains(&level) {
        return Err(invalid("level", format!("must lie in [0, 1), got {level}")));
    }
    let settings = BisectionSettings {
        target: level,
        increasing: true,
        ..*settings
    };
    let bracket = bisect(&settings, |lambda, reps, k| {
        let s = stream.substream("censoring", k);
        replicates::bernoulli(reps, &s, |r| Ok(diameter_trial(lambda, law, radius, r)?.censored))
    })?;
    Ok(CensoringBracket {
        law: law.clone(),
        radius,
        level,
        bracket,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_limit_is_the_bare_segment() {
        let e = estimate_lambda_d(1e-5, &RadiusLaw::fixed(1.0), 2, 200, &RngStream::new(4)).unwrap();
        assert!((e.mean_diameter.mean - 1.0).abs() < 0.05);
        assert!(e.settled && !e.unreliable);
    }

    #[test]
    fn censoring_flags_edge_contact() {
        let seed = Rect::unit_interval(0);
        let grains = [Grain::new(Point::new(0.5, 0.0), 1.0), Grain::new(Point::new(0.5, 1.9), 1.0)];
        assert!(!cluster_diameter(&grains[..1], &seed, 3.0).censored);
        assert!(cluster_diameter(&grains, &seed, 2.5).censored);
    }
}
