//! Stochastic bisection for the level crossing of a monotone probability
//! curve `λ ↦ p(λ)` observed through Bernoulli estimates.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::stats::BernoulliEstimate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeDecision {
    /// The level is crossed above the probe.
    RootAbove,
    /// The level is crossed below the probe.
    RootBelow,
    /// The probe's interval contains the level.
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub lambda: f64,
    pub estimate: BernoulliEstimate,
    pub decision: ProbeDecision,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub probes: Vec<Probe>,
    pub reps_used: u64,
    pub converged: bool,
    pub budget_exhausted: bool,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn overlaps(&self, other: &Bracket) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// No trace pair `λ1 < λ2` has disjoint intervals ordered against the
    /// given monotonicity.
    pub fn monotone_consistent(&self, increasing: bool) -> bool {
        self.probes.iter().all(|a| {
            self.probes.iter().all(|b| {
                if a.lambda >= b.lambda {
                    return true;
                }
                if increasing {
                    a.estimate.ci_lo <= b.estimate.ci_hi
                } else {
                    b.estimate.ci_lo <= a.estimate.ci_hi
                }
            })
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisectionSettings {
    pub lo: f64,
    pub hi: f64,
    pub target: f64,
    pub tol: f64,
    pub reps_per_probe: u64,
    /// Cap on the total number of replicates.
    pub budget: u64,
    /// Whether `p` increases with `λ`.
    pub increasing: bool,
}

fn decide(e: &BernoulliEstimate, target: f64, increasing: bool) -> ProbeDecision {
    let below = e.ci_hi < target;
    let above = e.ci_lo > target;
    match (below, above, increasing) {
        (true, _, true) | (_, true, false) => ProbeDecision::RootAbove,
        (_, true, true) | (true, _, false) => ProbeDecision::RootBelow,
        _ => ProbeDecision::Ambiguous,
    }
}

/// Narrows `[lo, hi]` around the level crossing. `probe(λ, reps, k)` must
/// return an estimate of `p(λ)` from `reps` replicates using an independent
/// stream for each probe number `k`.
///
/// When the midpoint is ambiguous both quarter points are probed; if those
/// are ambiguous too the replicate count is quadrupled while the budget
/// allows.
pub fn bisect<F>(s: &BisectionSettings, mut probe: F) -> Result<Bracket>
where
    F: FnMut(f64, u64, u64) -> Result<BernoulliEstimate>,
{
    if !(s.lo < s.hi) || !(s.tol > 0.0) || !(0.0..=1.0).contains(&s.target) {
        return Err(invalid("bisection", format!("bad settings {s:?}")));
    }
    let mut out = Bracket {
        lo: s.lo,
        hi: s.hi,
        probes: Vec::new(),
        reps_used: 0,
        converged: false,
        budget_exhausted: false,
    };
    let mut reps = s.reps_per_probe;
    let mut run = |lambda: f64, reps: u64, out: &mut Bracket| -> Result<Option<ProbeDecision>> {
        if out.reps_used + reps > s.budget {
            out.budget_exhausted = true;
            return Ok(None);
        }
        let estimate = probe(lambda, reps, out.probes.len() as u64)?;
        out.reps_used += reps;
        let decision = decide(&estimate, s.target, s.increasing);
        out.probes.push(Probe {
            lambda,
            estimate,
            decision,
        });
        Ok(Some(decision))
    };
    while out.width() > s.tol {
        let mid = 0.5 * (out.lo + out.hi);
        match run(mid, reps, &mut out)? {
            None => break,
            Some(ProbeDecision::RootAbove) => out.lo = mid,
            Some(ProbeDecision::RootBelow) => out.hi = mid,
            Some(ProbeDecision::Ambiguous) => {
                let q1 = 0.5 * (out.lo + mid);
                let q3 = 0.5 * (mid + out.hi);
                let d1 = run(q1, reps, &mut out)?;
                let d3 = run(q3, reps, &mut out)?;
                let mut narrowed = false;
                if d1 == Some(ProbeDecision::RootAbove) {
                    out.lo = q1;
                    narrowed = true;
                }
                if d3 == Some(ProbeDecision::RootBelow) {
                    out.hi = q3;
                    narrowed = true;
                }
                if out.budget_exhausted {
                    break;
                }
                if !narrowed {
                    reps *= 4;
                }
            }
        }
    }
    out.converged = out.width() <= s.tol;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RngStream;
    use rand::Rng;

    fn logistic(x: f64) -> f64 {
        1.0 / (1.0 + (-(x - 0.37) / 0.01).exp())
    }

    fn sim(lambda: f64, reps: u64, k: u64, flip: bool) -> Result<BernoulliEstimate> {
        let s = RngStream::with_stream(9, k);
        let mut rng = s.rng();
        let p = if flip { 1.0 - logistic(lambda) } else { logistic(lambda) };
        let hits = (0..reps).filter(|_| rng.random::<f64>() < p).count() as u64;
        Ok(BernoulliEstimate::new(hits, reps, s))
    }

    #[test]
    fn brackets_the_level_from_both_sides() {
        for flip in [false, true] {
            let settings = BisectionSettings {
                lo: 0.2,
                hi: 0.6,
                target: 0.5,
                tol: 0.01,
                reps_per_probe: 2000,
                budget: 200_000,
                increasing: !flip,
            };
            let b = bisect(&settings, |l, r, k| sim(l, r, k, flip)).unwrap();
            assert!(b.converged);
            assert!(b.lo <= 0.37 && 0.37 <= b.hi, "{b:?}");
            assert!(b.monotone_consistent(!flip));
        }
    }

    #[test]
    fn budget_stops_early() {
        let settings = BisectionSettings {
            lo: 0.2,
            hi: 0.6,
            target: 0.5,
            tol: 1e-6,
            reps_per_probe: 100,
            budget: 500,
            increasing: true,
        };
        let b = bisect(&settings, |l, r, k| sim(l, r, k, false)).unwrap();
        assert!(b.budget_exhausted && !b.converged);
        assert!(b.reps_used <= 500);
    }
}
