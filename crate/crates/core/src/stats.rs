//! Bernoulli estimates with Wilson score intervals and a few running
//! summaries shared by the estimators.

use serde::{Deserialize, Serialize};

use crate::model::RngStream;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Monte Carlo estimate of an event probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernoulliEstimate {
    pub successes: u64,
    pub trials: u64,
    pub point: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: RngStream,
}

impl BernoulliEstimate {
    pub fn new(successes: u64, trials: u64, seed: RngStream) -> Self {
        assert!(trials > 0 && successes <= trials, "invalid counts {successes}/{trials}");
        let (ci_lo, ci_hi) = wilson_interval(successes, trials, Z95);
        let point = successes as f64 / trials as f64;
        Self {
            successes,
            trials,
            point,
            ci_lo: ci_lo.min(point),
            ci_hi: ci_hi.max(point),
            seed,
        }
    }

    /// Whether the two 95% intervals intersect.
    pub fn overlaps(&self, other: &BernoulliEstimate) -> bool {
        self.ci_lo <= other.ci_hi && other.ci_lo <= self.ci_hi
    }

    pub fn std_error(&self) -> f64 {
        (self.point * (1.0 - self.point) / self.trials as f64).sqrt()
    }
}

/// Wilson score interval for `successes / trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Mean with a normal-approximation 95% interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl MeanEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let std_error = (var / n).sqrt();
        Self {
            mean,
            std_error,
            n: xs.len() as u64,
            ci_lo: mean - Z95 * std_error,
            ci_hi: mean + Z95 * std_error,
        }
    }
}

/// Three-way verdict for an inequality checked against noisy estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Inconclusive,
    Violated,
}

impl Verdict {
    /// Verdict for `lhs <= rhs` given an interval `[lhs_lo, lhs_hi]` around
    /// the left side's point value `lhs` and a conservative upper value of
    /// the right side.
    pub fn for_upper_bound(lhs_point: f64, lhs_lo: f64, rhs_hi: f64) -> Self {
        if lhs_lo > rhs_hi {
            Verdict::Violated
        } else if lhs_point > rhs_hi {
            Verdict::Inconclusive
        } else {
            Verdict::Consistent
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_bounds() {
        let e = BernoulliEstimate::new(0, 10_000, RngStream::new(0));
        assert_eq!(e.ci_lo, 0.0);
        let z2 = Z95 * Z95;
        assert!((e.ci_hi - z2 / (10_000.0 + z2)).abs() < 1e-15);
        let e = BernoulliEstimate::new(37, 100, RngStream::new(0));
        assert!(e.ci_lo <= e.point && e.point <= e.ci_hi);
        // statsmodels proportion_confint(37, 100, method="wilson").
        assert!((e.ci_lo - 0.281_823_605_343).abs() < 1e-9);
        assert!((e.ci_hi - 0.467_794_704_191).abs() < 1e-9);
    }

    #[test]
    fn verdicts() {
        assert_eq!(Verdict::for_upper_bound(0.1, 0.05, 0.2), Verdict::Consistent);
        assert_eq!(Verdict::for_upper_bound(0.3, 0.15, 0.2), Verdict::Inconclusive);
        assert_eq!(Verdict::for_upper_bound(0.5, 0.4, 0.2), Verdict::Violated);
    }
}
