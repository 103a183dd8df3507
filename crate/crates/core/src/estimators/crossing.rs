//! Square crossing probabilities and their level-crossing thresholds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bisection::{bisect, Bracket, BisectionSettings};
use crate::error::{invalid, require_positive, Error, Result};
use crate::geometry::{Rect, Region};
use crate::model::{sample_reaching_grains, RadiusLaw, RngStream};
use crate::percolation::{crossing, CrossingQuery, Phase, Span};
use crate::replicates;
use crate::stats::BernoulliEstimate;

/// Bound on the expected number of omitted grains for the probe square.
pub const OMITTED_GRAIN_BOUND: f64 = 1e-4;

/// Sampling margin around an `L × L` square: the support bound for bounded
/// laws, otherwise the first doubling radius at which a Markov bound on the
/// expected number of grains centred further out but still reaching the
/// square drops below `eps`.
pub fn probe_reach(side: f64, lambda: f64, law: &RadiusLaw, eps: f64) -> Result<f64> {
    if let Some(s) = law.support_max() {
        return Ok(s);
    }
    let mut r = law.upper_quantile(1e-3).max(1.0);
    while r < 1e12 {
        let mut bound = 0.0;
        let mut lo = r;
        for _ in 0..200 {
            let hi = 2.0 * lo;
            let term = lambda * (4.0 * side * hi + PI * hi * hi) * law.tail_ge(lo);
            bound += term;
            if term < 1e-3 * eps || !hi.is_finite() {
                break;
            }
            lo = hi;
        }
        if bound <= eps {
            return Ok(r);
        }
        r *= 2.0;
    }
    Err(Error::Unsupported(format!("no finite sampling margin for {law} at λ = {lambda}")))
}

fn square(side: f64) -> Result<Rect> {
    Rect::from_bounds(0.0, side, 0.0, side)
}

/// One sample of the left-right crossing of `[0, L]²` in the given phase.
pub fn square_crossing_trial(side: f64, lambda: f64, law: &RadiusLaw, phase: Phase, reach: f64, stream: &RngStream) -> Result<bool> {
    let sq = square(side)?;
    let grains = sample_reaching_grains(&Region::neighborhood(sq, reach)?, &sq, lambda, law, stream)?;
    // A square counts as horizontal, so the long way is left to right.
    crossing(&CrossingQuery {
        rect: sq,
        direction: Span::LongWay,
        phase,
        allowed_grains: &grains.grains,
    })
}

/// Estimate of the left-right crossing probability of `[0, L]²`.
pub fn crossing_probability(side: f64, lambda: f64, law: &RadiusLaw, phase: Phase, n_reps: u64, stream: &RngStream) -> Result<BernoulliEstimate> {
    require_positive("side", side)?;
    require_positive("lambda", lambda)?;
    law.validate()?;
    let reach = probe_reach(side, lambda, law, OMITTED_GRAIN_BOUND)?;
    replicates::bernoulli(n_reps, stream, |r| square_crossing_trial(side, lambda, law, phase, reach, r))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub side: f64,
    pub phase: Phase,
    pub estimate: BernoulliEstimate,
}

pub fn crossing_prob_sweep(
    lambdas: &[f64],
    side: f64,
    law: &RadiusLaw,
    phase: Phase,
    n_reps: u64,
    stream: &RngStream,
) -> Result<Vec<SweepRow>> {
    if lambdas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("lambdas", "grid must be strictly increasing"));
    }
    lambdas
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let estimate = crossing_probability(side, lambda, law, phase, n_reps, &stream.substream("sweep", i as u64))?;
            Ok(SweepRow {
                lambda,
                side,
                phase,
                estimate,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub law: RadiusLaw,
    pub phase: Phase,
    pub scales: Vec<f64>,
    pub target: f64,
    pub tol: f64,
    pub reps_per_probe: u64,
    /// Cap on replicates per scale.
    pub budget: u64,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
}

impl ThresholdConfig {
    /// Search window `λ π E[ρ²] ∈ [0.5, 2]` around the planar critical
    /// filling factor (about 1.13).
    pub fn with_defaults(law: RadiusLaw, phase: Phase, scales: Vec<f64>) -> Self {
        let m2 = law.moment(2);
        Self {
            law,
            phase,
            scales,
            target: 0.5,
            tol: 0.02,
            reps_per_probe: 10_000,
            budget: 400_000,
            lambda_lo: 0.5 / (PI * m2),
            lambda_hi: 2.0 / (PI * m2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleBracket {
    pub side: f64,
    pub bracket: Bracket,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub config: ThresholdConfig,
    /// Bracket at the largest scale.
    pub lo: f64,
    pub hi: f64,
    pub side: f64,
    /// Per-scale brackets in the order of `config.scales`: the drift trace.
    pub trace: Vec<ScaleBracket>,
    pub warnings: Vec<String>,
}

impl ThresholdEstimate {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn overlaps(&self, other: &ThresholdEstimate) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// Finite-size threshold: the `λ` at which the square crossing probability
/// equals `target`, bracketed at each scale.
pub fn estimate_threshold(config: &ThresholdConfig, stream: &RngStream) -> Result<ThresholdEstimate> {
    config.law.validate()?;
    if config.law.atom_at_zero() >= 1.0 {
        return Err(invalid("law", "radius law is concentrated at zero"));
    }
    if config.scales.is_empty() {
        return Err(invalid("scales", "need at least one scale"));
    }
    let mut trace = Vec::new();
    let mut warnings = Vec::new();
    for (i, &side) in config.scales.iter().enumerate() {
        let scale_stream = stream.substream("threshold", i as u64);
        let settings = BisectionSettings {
            lo: config.lambda_lo,
            hi: config.lambda_hi,
            target: config.target,
            tol: config.tol,
            reps_per_probe: config.reps_per_probe,
            budget: config.budget,
            increasing: config.phase == Phase::Occupied,
        };
        let bracket = bisect(&settings, |lambda, reps, k| {
            crossing_probability(side, lambda, &config.law, config.phase, reps, &scale_stream.substream("probe", k))
        })?;
        if bracket.budget_exhausted {
            warnings.push(format!("budget exhausted at L = {side}; bracket width {}", bracket.width()));
        }
        if !bracket.monotone_consistent(settings.increasing) {
            warnings.push(format!("non-monotone probe trace at L = {side}"));
        }
        trace.push(ScaleBracket { side, bracket });
    }
    let last = trace.last().expect("at least one scale");
    Ok(ThresholdEstimate {
        config: config.clone(),
        lo: last.bracket.lo,
        hi: last.bracket.hi,
        side: last.side,
        trace,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_square_not_crossed() {
        let e = crossing_probability(32.0, 1e-6, &RadiusLaw::fixed(1.0), Phase::Occupied, 200, &RngStream::new(1)).unwrap();
        assert!(e.point < 0.01);
    }

    #[test]
    fn heavy_tail_reach_is_finite_for_finite_second_moment() {
        let r = probe_reach(32.0, 0.1, &RadiusLaw::pareto(4.0, 1.0), OMITTED_GRAIN_BOUND).unwrap();
        assert!(r > 1.0 && r < 1e6);
        assert!(probe_reach(32.0, 0.1, &RadiusLaw::pareto(1.8, 1.0), OMITTED_GRAIN_BOUND).is_err());
    }

    #[test]
    fn zero_law_rejected() {
        let law = RadiusLaw::ZeroAtom {
            p0: 1.0,
            inner: Box::new(RadiusLaw::fixed(1.0)),
        };
        let cfg = ThresholdConfig::with_defaults(RadiusLaw::fixed(1.0), Phase::Occupied, vec![8.0]);
        let cfg = ThresholdConfig { law, ..cfg };
        assert!(estimate_threshold(&cfg, &RngStream::new(0)).is_err());
    }
}
