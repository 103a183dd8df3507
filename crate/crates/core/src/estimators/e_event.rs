//! The event that every unit segment `I_k`, `k >= 2`, has a cluster of
//! diameter at most `k/2` while `I_0 ∪ I_1` is uncovered, truncated at
//! `k_max` with a stationarity tail bound.

use serde::{Deserialize, Serialize};

use super::lambda_d::cluster_diameter;
use crate::error::{invalid, require_positive, Result};
use crate::geometry::{disc_meets_rect, Point, Rect, Region};
use crate::model::{sample_boolean, RadiusLaw, RngStream};
use crate::multiscale::existence_probability;
use crate::percolation::{build_components, union_diameter};
use crate::replicates;
use crate::stats::{BernoulliEstimate, MeanEstimate};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EEventReport {
    pub lambda: f64,
    pub law: RadiusLaw,
    pub k_max: u32,
    pub n_reps: u64,
    pub margin: f64,
    pub truncated: BernoulliEstimate,
    /// Frequency of `ξ ∩ (I_0 ∪ I_1) = ∅` and its exact value for the window.
    pub empty_start: BernoulliEstimate,
    pub empty_start_exact: f64,
    /// `max(0, ⌈2D(W_0)⌉ - 1 - k_max)` averaged: the count of `k > k_max`
    /// with `D > k/2`.
    pub tail_terms: MeanEstimate,
    pub tail_censored: u64,
    /// Upper bound on `Σ_{k > k_max} P[D(W_0) > k/2]`.
    pub tail_bound: f64,
    /// `P̂_lo[truncated] - tail_bound`.
    pub lower_bound: f64,
    pub lower_bound_point: f64,
    pub informative: bool,
}

/// Radius beyond which grains are too rare to matter for the window margin.
fn grain_reach(law: &RadiusLaw) -> f64 {
    law.support_max().unwrap_or_else(|| law.upper_quantile(1e-9))
}

pub fn estimate_e_event(lambda: f64, law: &RadiusLaw, k_max: u32, n_reps: u64, stream: &RngStream) -> Result<EEventReport> {
    require_positive("lambda", lambda)?;
    law.validate()?;
    if k_max < 2 {
        return Err(invalid("k_max", "need k_max >= 2"));
    }
    let reach = grain_reach(law);
    let margin = f64::from(k_max) / 2.0 + 2.0 * reach + 1.0;
    let hull = Rect::from_bounds(0.0, f64::from(k_max) + 1.0, 0.0, 0.0)?;
    let window = Region::neighborhood(hull, margin)?;
    let start = Rect::from_bounds(0.0, 2.0, 0.0, 0.0)?;

    let outcomes = replicates::collect(n_reps, &stream.substream("event", 0), |r| {
        let grains = sample_boolean(&window, lambda, law, r)?.grains;
        let empty = !grains.iter().any(|g| g.radius > 0.0 && disc_meets_rect(g, &start));
        let cs = build_components(&grains, None);
        let classes = cs.classes();
        let mut ok = empty;
        for k in 2..=k_max {
            if !ok {
                break;
            }
            let seed = Rect::unit_interval(k.into());
            let mut discs: Vec<(Point, f64)> = seed.corners().iter().map(|&c| (c, 0.0)).collect();
            let mut hit = vec![false; cs.class_count];
            for (i, g) in grains.iter().enumerate() {
                if disc_meets_rect(g, &seed) {
                    hit[cs.labels[i]] = true;
                }
            }
            for (c, members) in classes.iter().enumerate() {
                if hit[c] {
                    discs.extend(members.iter().map(|&i| (grains[i].center, grains[i].radius)));
                }
            }
            ok = union_diameter(&discs) <= f64::from(k) / 2.0;
        }
        Ok((ok, empty))
    })?;
    let truncated = BernoulliEstimate::new(outcomes.iter().filter(|o| o.0).count() as u64, n_reps, *stream);
    let empty_start = BernoulliEstimate::new(outcomes.iter().filter(|o| o.1).count() as u64, n_reps, *stream);
    let empty_start_exact = 1.0 - existence_probability(&window, &start, lambda, law)?;

    // Independent samples of D(W_0) in a window wide enough to resolve k_max.
    let tail_radius = 2.0 * f64::from(k_max) + 2.0 * reach + 1.0;
    let seed = Rect::unit_interval(0);
    let tail_window = Region::neighborhood(seed, tail_radius)?;
    let diam = replicates::collect(n_reps, &stream.substream("tail", 0), |r| {
        let grains = sample_boolean(&tail_window, lambda, law, r)?.grains;
        Ok(cluster_diameter(&grains, &seed, tail_radius))
    })?;
    let tail_censored = diam.iter().filter(|d| d.censored).count() as u64;
    let terms: Vec<f64> = diam
        .iter()
        .map(|d| ((2.0 * d.diameter).ceil() - 1.0 - f64::from(k_max)).max(0.0))
        .collect();
    let tail_terms = MeanEstimate::from_samples(&terms);
    let tail_bound = if tail_censored > 0 {
        f64::INFINITY
    } else {
        tail_terms.ci_hi.max(0.0)
    };
    let lower_bound = truncated.ci_lo - tail_bound;
    Ok(EEventReport {
        lambda,
        law: law.clone(),
        k_max,
        n_reps,
        margin,
        truncated,
        empty_start,
        empty_start_exact,
        tail_terms,
        tail_censored,
        tail_bound,
        lower_bound,
        lower_bound_point: truncated.point - tail_terms.mean.max(0.0),
        informative: lower_bound > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_model_is_uninformative() {
        let r = estimate_e_event(2.0, &RadiusLaw::fixed(1.0), 4, 50, &RngStream::new(1)).unwrap();
        assert_eq!(r.truncated.successes, 0);
        assert!(!r.informative);
    }
}
