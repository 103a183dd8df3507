//! Multiscale certificates along the decade ladder `α_n = 10^n b`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::chain::{bound_chain_with_tail, ChainReport};
use super::events::{estimate_f, existence_probability, exact_g, markov_bound_g, require_kappa, C1, C2};
use crate::error::{invalid, require_positive, Result};
use crate::geometry::{make_strip, Orientation, Point, Rect, Region};
use crate::model::{sample_reaching_grains, RadiusLaw, RngStream};
use crate::percolation::{occupied_crossing, CrossingQuery, Span};
use crate::replicates;
use crate::stats::{BernoulliEstimate, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleLadder {
    pub base: f64,
    pub lambda: f64,
    pub law: RadiusLaw,
    pub kappa: f64,
    pub n_max: u32,
}

impl ScaleLadder {
    pub fn validate(&self) -> Result<()> {
        require_positive("base", self.base)?;
        require_positive("lambda", self.lambda)?;
        require_kappa(self.kappa)?;
        if self.n_max == 0 {
            return Err(invalid("n_max", "need at least one scale"));
        }
        self.law.validate()
    }

    pub fn alpha(&self, n: u32) -> f64 {
        self.base * 10f64.powi(n as i32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateVerdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleTerm {
    pub n: u32,
    pub alpha: f64,
    pub f_hat: Option<BernoulliEstimate>,
    /// Upper bound used for `P[F(α_n)]` (empirical upper CI or chain).
    pub f_bound: Option<f64>,
    pub g_exact: f64,
    pub g_markov: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummabilityReport {
    pub ladder: ScaleLadder,
    pub n_empirical: u32,
    pub n_reps: u64,
    pub scales: Vec<ScaleTerm>,
    /// Markov bound on `Σ_{n > n_max} P[G(α_n)]`.
    pub g_markov_tail: f64,
    pub chain: ChainReport,
    /// `Σ_{n <= n_empirical} F̂_hi(α_n)`.
    pub head: f64,
    /// Chain bound on `Σ_{n > n_empirical} P[F(α_n)]`.
    pub f_tail: f64,
    /// `Σ_{n >= 1} P[G(α_n)]`, exact up to `n_max` plus the Markov tail.
    pub g_sum: f64,
    pub total: f64,
    pub verdict: CertificateVerdict,
}

impl SummabilityReport {
    /// Bound on `Σ_{n > n_empirical} (P[F(α_n)] + P[G(α_n)])`.
    pub fn tail_beyond_empirical(&self) -> f64 {
        let g: f64 = self
            .scales
            .iter()
            .filter(|t| t.n > self.n_empirical)
            .map(|t| t.g_exact)
            .sum();
        self.f_tail + g + self.g_markov_tail
    }
}

/// Hybrid certificate for `Σ_{n>=1} (P[F(α_n)] + P[G(α_n)]) <= 1/2`.
///
/// Scales up to `n_empirical` use Monte Carlo upper bounds. Beyond that the
/// chain `f_n <= f_{n-1}/C2 + g_n` with `f = C1 P[F]` and
/// `g(α) = C1² P[G(α/10)]` is anchored at `C1 F̂_hi(α_{n_empirical})`.
pub fn summability_certificate(
    ladder: &ScaleLadder,
    n_empirical: u32,
    n_reps: u64,
    stream: &RngStream,
) -> Result<SummabilityReport> {
    ladder.validate()?;
    if n_empirical > ladder.n_max {
        return Err(invalid("n_empirical", format!("{n_empirical} exceeds n_max = {}", ladder.n_max)));
    }
    let mut scales = Vec::new();
    let mut anchor = None;
    for n in n_empirical.min(1)..=ladder.n_max {
        let alpha = ladder.alpha(n);
        let f_hat = if n <= n_empirical {
            Some(estimate_f(alpha, ladder.lambda, &ladder.law, n_reps, &stream.substream("F", n.into()))?)
        } else {
            None
        };
        if n == n_empirical {
            anchor = f_hat;
        }
        scales.push(ScaleTerm {
            n,
            alpha,
            f_bound: f_hat.filter(|_| n >= 1).map(|f| f.ci_hi),
            f_hat,
            g_exact: exact_g(alpha, ladder.lambda, &ladder.law, ladder.kappa)?,
            g_markov: markov_bound_g(alpha, ladder.lambda, &ladder.law, ladder.kappa),
        });
    }
    let anchor = anchor.expect("anchor scale is always estimated");
    let g_markov_tail = ladder.lambda
        * PI
        * ladder.kappa
        * ladder.kappa
        * ladder.law.decade_tail_series(ladder.base, ladder.n_max as i32 + 1);

    // Chain step k covers scale n_empirical + k and uses G one decade lower.
    let g_chain: Vec<f64> = scales
        .iter()
        .filter(|t| t.n >= n_empirical)
        .map(|t| C1 * C1 * t.g_exact)
        .collect();
    let chain = bound_chain_with_tail(C1 * anchor.ci_hi, &g_chain, C1 * C1 * g_markov_tail, C2);
    for t in scales.iter_mut().filter(|t| t.n > n_empirical) {
        let k = (t.n - n_empirical) as usize;
        t.f_bound = Some((chain.f_bounds[k - 1] / C1).min(1.0));
    }
    let head: f64 = scales
        .iter()
        .filter(|t| t.n >= 1 && t.n <= n_empirical)
        .filter_map(|t| t.f_bound)
        .sum();
    let f_tail = chain.sum_f_bound / C1;
    let g_sum = scales.iter().filter(|t| t.n >= 1).map(|t| t.g_exact).sum::<f64>() + g_markov_tail;
    let total = head + f_tail + g_sum;
    let verdict = if !chain.applicable {
        CertificateVerdict::NotApplicable
    } else if total <= 0.5 {
        CertificateVerdict::Pass
    } else {
        CertificateVerdict::Fail
    };
    Ok(SummabilityReport {
        ladder: ladder.clone(),
        n_empirical,
        n_reps,
        scales,
        g_markov_tail,
        chain,
        head,
        f_tail,
        g_sum,
        total,
        verdict,
    })
}

/// Orientation of `S_n`: horizontal for odd `n`.
pub fn strip_orientation(n: u32) -> Orientation {
    if n % 2 == 1 {
        Orientation::Horizontal
    } else {
        Orientation::Vertical
    }
}

/// `S_n`, the origin-centred strip with short side `10^n b`.
pub fn ladder_strip(base: f64, n: u32) -> Result<Rect> {
    make_strip(base * 10f64.powi(n as i32), strip_orientation(n), Point::ORIGIN)
}

/// Whether `a` spans `b` across its short dimension. Edges that agree up
/// to rounding count as equal, since `10 (10^n b)` and `10^{n+1} b` may
/// differ in the last bit.
pub fn crosses_short_way(a: &Rect, b: &Rect) -> bool {
    let tol = 8.0 * f64::EPSILON * a.width().max(a.height()).max(b.width()).max(b.height());
    let le = |x: f64, y: f64| x <= y + tol;
    match b.orientation() {
        Orientation::Horizontal => le(a.lo.y, b.lo.y) && le(b.hi.y, a.hi.y) && le(b.lo.x, a.lo.x) && le(a.hi.x, b.hi.x),
        Orientation::Vertical => le(a.lo.x, b.lo.x) && le(b.hi.x, a.hi.x) && le(b.lo.y, a.lo.y) && le(a.hi.y, b.hi.y),
    }
}

/// `S_1, .., S_{n_max}`.
pub fn strip_sequence(base: f64, n_max: u32) -> Result<Vec<Rect>> {
    require_positive("base", base)?;
    if n_max == 0 {
        return Err(invalid("n_max", "need at least one strip"));
    }
    let strips = (1..=n_max).map(|n| ladder_strip(base, n)).collect::<Result<Vec<_>>>()?;
    debug_assert!(strips.windows(2).all(|w| crosses_short_way(&w[0], &w[1])));
    Ok(strips)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HJEntry {
    pub n: u32,
    pub h: BernoulliEstimate,
    pub j: f64,
    pub f_hat: BernoulliEstimate,
    pub g: f64,
    /// `P̂[H ∪ J]` with `H`, `J` independent.
    pub union_point: f64,
    pub union_lo: f64,
    pub union_hi: f64,
    /// `F̂_hi + G`.
    pub rhs_hi: f64,
    /// Whether `S_{n+4} ⊂ B(κ α_n)`, which makes `J_n ⊂ G(α_n)`.
    pub containment: bool,
    pub verdict: Verdict,
}

fn union(h: f64, j: f64) -> f64 {
    h + j - h * j
}

/// One sample of `H_n`: the grains centred in `S_{n+2}` cross `S_n` the
/// short way.
pub fn h_trial(ladder: &ScaleLadder, n: u32, stream: &RngStream) -> Result<bool> {
    let s = ladder_strip(ladder.base, n)?;
    let source = Region::Rect(ladder_strip(ladder.base, n + 2)?);
    let grains = sample_reaching_grains(&source, &s, ladder.lambda, &ladder.law, stream)?;
    occupied_crossing(&CrossingQuery::occupied(s, Span::ShortWay, &grains.grains))
}

/// Exact `P[J_n]`: a grain centred in `S_{n+4} \ S_{n+2}` meets `S_n`.
pub fn exact_j(ladder: &ScaleLadder, n: u32) -> Result<f64> {
    let source = Region::difference(
        Region::Rect(ladder_strip(ladder.base, n + 4)?),
        Region::Rect(ladder_strip(ladder.base, n + 2)?),
    )?;
    existence_probability(&source, &ladder_strip(ladder.base, n)?, ladder.lambda, &ladder.law)
}

fn h_j_entry(ladder: &ScaleLadder, n: u32, f_hat: BernoulliEstimate, n_reps: u64, stream: &RngStream) -> Result<HJEntry> {
    let h = replicates::bernoulli(n_reps, &stream.substream("H", n.into()), |r| h_trial(ladder, n, r))?;
    let j = exact_j(ladder, n)?;
    let alpha = ladder.alpha(n);
    let g = exact_g(alpha, ladder.lambda, &ladder.law, ladder.kappa)?;
    let outer = ladder_strip(ladder.base, n + 4)?;
    let containment = outer.corners().iter().all(|c| c.dist(Point::ORIGIN) <= ladder.kappa * alpha);
    let rhs_hi = f_hat.ci_hi + g;
    let union_point = union(h.point, j);
    let union_lo = union(h.ci_lo, j);
    Ok(HJEntry {
        n,
        h,
        j,
        f_hat,
        g,
        union_point,
        union_lo,
        union_hi: union(h.ci_hi, j),
        rhs_hi,
        containment,
        verdict: Verdict::for_upper_bound(union_point, union_lo, rhs_hi),
    })
}

/// `P̂[H_n]`, exact `P[J_n]`, and the verdict on
/// `P[H_n ∪ J_n] <= P[F(α_n)] + P[G(α_n)]`.
pub fn estimate_h_j(n: u32, ladder: &ScaleLadder, n_reps: u64, stream: &RngStream) -> Result<HJEntry> {
    ladder.validate()?;
    if n == 0 {
        return Err(invalid("n", "strips are indexed from 1"));
    }
    let f_hat = estimate_f(ladder.alpha(n), ladder.lambda, &ladder.law, n_reps, &stream.substream("F", n.into()))?;
    h_j_entry(ladder, n, f_hat, n_reps, stream)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VacancyReport {
    pub ladder: ScaleLadder,
    pub n_direct: u32,
    pub n_reps: u64,
    pub entries: Vec<HJEntry>,
    /// Certified bound on `Σ_{n > n_direct} P[H_n ∪ J_n]`.
    pub tail: f64,
    pub summability: SummabilityReport,
    /// `1 - Σ (P̂[H_n] + P[J_n]) - tail`, with upper CI ends for `H_n`.
    pub bound: f64,
    /// The same with point estimates.
    pub bound_point: f64,
    pub informative: bool,
    pub at_least_half: bool,
}

/// Lower bound on the probability that none of `H_n`, `J_n` occurs: direct
/// estimates for `n <= n_direct`, the summability chain beyond.
pub fn vacancy_certificate(ladder: &ScaleLadder, n_direct: u32, n_reps: u64, stream: &RngStream) -> Result<VacancyReport> {
    let summability = summability_certificate(ladder, n_direct, n_reps, stream)?;
    let mut entries = Vec::new();
    for n in 1..=n_direct {
        let f_hat = summability.scales.iter().find(|t| t.n == n).and_then(|t| t.f_hat).expect("estimated scale");
        entries.push(h_j_entry(ladder, n, f_hat, n_reps, stream)?);
    }
    let tail = if summability.chain.applicable {
        summability.tail_beyond_empirical()
    } else {
        f64::INFINITY
    };
    let direct_hi: f64 = entries.iter().map(|e| e.h.ci_hi + e.j).sum();
    let direct_point: f64 = entries.iter().map(|e| e.h.point + e.j).sum();
    let bound = 1.0 - direct_hi - tail;
    Ok(VacancyReport {
        ladder: ladder.clone(),
        n_direct,
        n_reps,
        entries,
        tail,
        summability,
        bound,
        bound_point: 1.0 - direct_point - tail,
        informative: bound > 0.0,
        at_least_half: bound >= 0.5,
    })
}
