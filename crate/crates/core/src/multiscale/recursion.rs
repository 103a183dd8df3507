//! The one-step inequality `P[F(10α)] <= C1 (P[F(α)]² + P[G(α)])`.

use serde::{Deserialize, Serialize};

use super::events::{estimate_f, exact_g, require_kappa, C1};
use crate::error::Result;
use crate::model::{RadiusLaw, RngStream};
use crate::stats::{BernoulliEstimate, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionEntry {
    pub alpha: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub law: RadiusLaw,
    /// `F̂(α)`.
    pub f_alpha: BernoulliEstimate,
    /// `F̂(10α)`, the left side.
    pub f_10alpha: BernoulliEstimate,
    /// Exact `P[G(α)]`.
    pub g_alpha: f64,
    /// `C1 (F̂_hi(α)² + G(α))`.
    pub rhs: f64,
    /// `rhs - F̂(10α)`.
    pub slack: f64,
    pub verdict: Verdict,
}

pub fn check_recursion(
    alpha: f64,
    lambda: f64,
    law: &RadiusLaw,
    kappa: f64,
    n_reps: u64,
    stream: &RngStream,
) -> Result<RecursionEntry> {
    require_kappa(kappa)?;
    let f_alpha = estimate_f(alpha, lambda, law, n_reps, &stream.substream("F", 0))?;
    let f_10alpha = estimate_f(10.0 * alpha, lambda, law, n_reps, &stream.substream("F", 1))?;
    let g_alpha = exact_g(alpha, lambda, law, kappa)?;
    let rhs = C1 * (f_alpha.ci_hi * f_alpha.ci_hi + g_alpha);
    let verdict = if f_10alpha.ci_lo <= rhs {
        Verdict::Consistent
    } else {
        Verdict::Violated
    };
    Ok(RecursionEntry {
        alpha,
        lambda,
        kappa,
        law: law.clone(),
        f_alpha,
        f_10alpha,
        g_alpha,
        rhs,
        slack: rhs - f_10alpha.point,
        verdict,
    })
}
