//! Probabilities of the strip-crossing event `F(α)` and the long-range
//! reach event `G(α)`.
//!
//! `F(α)`: `S(α)` is crossed the short way by the grains centred in
//! `S(α)_α`. `G(α)`: some grain centred in `B(κα) \ S(α)_α` meets `S(α)`.
//! Reach events are computed exactly from the Poisson existence formula
//! `P = 1 - exp(-Λ)` with `Λ = λ ∫ P[ρ >= dist(x, S)] dx`.

use std::cell::RefCell;
use std::f64::consts::PI;

use crate::error::{invalid, require_positive, Error, Result};
use crate::geometry::{strip, Point, Rect, Region};
use crate::model::{sample_reaching_grains, RadiusLaw, RngStream};
use crate::percolation::{occupied_crossing, CrossingQuery, Span};
use crate::quadrature::{integrate, Integral, Tolerance};
use crate::replicates;
use crate::stats::BernoulliEstimate;

/// Union-bound constant of the one-step recursion, `37²`.
pub const C1: f64 = 1369.0;
/// Contraction constant of the bound chain.
pub const C2: f64 = 9.0;

const OUTER_TOL: Tolerance = Tolerance::new(1e-13, 1e-7);
const INNER_TOL: Tolerance = Tolerance::new(1e-15, 1e-9);

pub(crate) fn require_kappa(kappa: f64) -> Result<()> {
    if kappa.is_finite() && kappa >= 10.0 {
        Ok(())
    } else {
        Err(invalid("kappa", format!("reach factor must be >= 10, got {kappa}")))
    }
}

/// `Λ = λ ∫_region P[ρ >= dist(x, target)] dx` by nested adaptive
/// quadrature, split at every kink of the region, the target and the law.
pub fn reach_intensity(region: &Region, target: &Rect, lambda: f64, law: &RadiusLaw) -> Result<Integral> {
    require_positive("lambda", lambda)?;
    law.validate()?;
    let zero = Integral {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
    };
    if law.tail_ge(region.min_dist_to(target)) == 0.0 {
        return Ok(zero);
    }
    let reach = law.support_max().unwrap_or(f64::INFINITY);
    let bbox = region.bbox();
    let y0 = bbox.lo.y.max(target.lo.y - reach);
    let y1 = bbox.hi.y.min(target.hi.y + reach);
    if y1 <= y0 {
        return Ok(zero);
    }
    let kinks = law.breakpoints();
    let mut ys = region.y_breakpoints();
    ys.extend([target.lo.y, target.hi.y]);
    for &b in &kinks {
        ys.extend([target.lo.y - b, target.hi.y + b]);
    }

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let line = |y: f64| -> f64 {
        let dy = (target.lo.y - y).max(y - target.hi.y).max(0.0);
        let mut xs = vec![target.lo.x, target.hi.x];
        for &b in &kinks {
            if b > dy {
                let h = (b * b - dy * dy).sqrt();
                xs.extend([target.lo.x - h, target.hi.x + h]);
            }
        }
        let mut total = 0.0;
        for (a, b) in region.slice_x(y) {
            let a = a.max(target.lo.x - reach);
            let b = b.min(target.hi.x + reach);
            let f = |x: f64| law.tail_ge(target.dist(Point::new(x, y)));
            match integrate(f, a, b, &xs, INNER_TOL) {
                Ok(i) => total += i.value,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                }
            }
        }
        total
    };
    let outer = integrate(line, y0, y1, &ys, OUTER_TOL)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(Integral {
        value: lambda * outer.value,
        error: lambda * outer.error,
        evaluations: outer.evaluations,
    })
}

/// `P[some grain centred in region meets target] = 1 - exp(-Λ)`.
pub fn existence_probability(region: &Region, target: &Rect, lambda: f64, law: &RadiusLaw) -> Result<f64> {
    let mass = reach_intensity(region, target, lambda, law)?;
    Ok(-(-mass.value).exp_m1())
}

/// `S(α)_α`, the source of the grains that decide `F(α)`.
pub fn f_source_region(alpha: f64) -> Result<Region> {
    Region::neighborhood(strip(alpha)?, alpha)
}

/// `B(κα) \ S(α)_α`, the source of the grains that decide `G(α)`.
pub fn g_source_region(alpha: f64, kappa: f64) -> Result<Region> {
    require_kappa(kappa)?;
    Region::difference(Region::disc(Point::ORIGIN, kappa * alpha)?, f_source_region(alpha)?)
}

/// Whether one sample of the grains centred in `S(α)_α` crosses `S(α)` the
/// short way. Only grains meeting the strip are drawn.
pub fn f_trial(alpha: f64, lambda: f64, law: &RadiusLaw, stream: &RngStream) -> Result<bool> {
    let s = strip(alpha)?;
    let grains = sample_reaching_grains(&f_source_region(alpha)?, &s, lambda, law, stream)?;
    occupied_crossing(&CrossingQuery::occupied(s, Span::ShortWay, &grains.grains))
}

/// Monte Carlo estimate of `P[F(α)]`.
pub fn estimate_f(alpha: f64, lambda: f64, law: &RadiusLaw, n_reps: u64, stream: &RngStream) -> Result<BernoulliEstimate> {
    require_positive("alpha", alpha)?;
    require_positive("lambda", lambda)?;
    law.validate()?;
    replicates::bernoulli(n_reps, stream, |r| f_trial(alpha, lambda, law, r))
}

/// Exact `P[G(α)]` with reach factor `κ`.
pub fn exact_g(alpha: f64, lambda: f64, law: &RadiusLaw, kappa: f64) -> Result<f64> {
    require_positive("alpha", alpha)?;
    existence_probability(&g_source_region(alpha, kappa)?, &strip(alpha)?, lambda, law)
}

/// Markov bound `λπ(κα)² P[ρ > α]` on `P[G(α)]`.
pub fn markov_bound_g(alpha: f64, lambda: f64, law: &RadiusLaw, kappa: f64) -> f64 {
    let r = kappa * alpha;
    lambda * PI * r * r * law.tail(alpha)
}

/// Monte Carlo estimate of `P[G(α)]`, the cross-check of [`exact_g`].
pub fn estimate_g(
    alpha: f64,
    lambda: f64,
    law: &RadiusLaw,
    kappa: f64,
    n_reps: u64,
    stream: &RngStream,
) -> Result<BernoulliEstimate> {
    let region = g_source_region(alpha, kappa)?;
    let s = strip(alpha)?;
    replicates::bernoulli(n_reps, stream, |r| {
        Ok(!sample_reaching_grains(&region, &s, lambda, law, r)?.is_empty())
    })
}
