//! The contraction chain `f_n <= f_{n-1}/C2 + g_n`, valid while
//! `f_{n-1} <= 1/C2`, and its summed bounds.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub f0: f64,
    pub c2: f64,
    pub g: Vec<f64>,
    /// Sum of the `g` terms beyond the listed ones.
    pub g_tail: f64,
    pub applicable: bool,
    pub reason: Option<String>,
    /// Bounds on `f_1, .., f_N` for the listed `g`.
    pub f_bounds: Vec<f64>,
    /// `Σ_{n>=1} f_n <= (f0/C2 + Σg) C2/(C2-1)`.
    pub sum_f_bound: f64,
    pub sum_g: f64,
    /// `Σ (f_n + g_n)` from the geometric sums.
    pub total_bound: f64,
    /// The same total with `Σ C2^{-k} <= 2`: `2 (f0/C2 + Σg) + Σg`.
    pub coarse_total_bound: f64,
}

pub fn bound_chain(f0: f64, g: &[f64], c2: f64) -> ChainReport {
    bound_chain_with_tail(f0, g, 0.0, c2)
}

pub fn bound_chain_with_tail(f0: f64, g: &[f64], g_tail: f64, c2: f64) -> ChainReport {
    let sum_g: f64 = g.iter().sum::<f64>() + g_tail;
    let reason = if !(c2 > 1.0) {
        Some(format!("contraction constant {c2} must exceed 1"))
    } else if !(0.0..=1.0 / c2).contains(&f0) {
        Some(format!("f0 = {f0} is outside [0, 1/C2]"))
    } else if g.iter().chain([&g_tail]).any(|&x| !(x >= 0.0)) {
        Some("g terms must be non-negative".to_owned())
    } else if sum_g > 1.0 / (c2 * c2) {
        Some(format!("sum of g = {sum_g} exceeds 1/C2²"))
    } else {
        None
    };
    let mut f_bounds = Vec::with_capacity(g.len());
    for n in 1..=g.len() {
        let mut f = f0 / c2.powi(n as i32);
        for (m, gm) in g.iter().enumerate().take(n) {
            f += gm / c2.powi((n - 1 - m) as i32);
        }
        f_bounds.push(f);
    }
    let head = f0 / c2 + sum_g;
    let sum_f_bound = head * c2 / (c2 - 1.0);
    ChainReport {
        f0,
        c2,
        g: g.to_vec(),
        g_tail,
        applicable: reason.is_none(),
        reason,
        f_bounds,
        sum_f_bound,
        sum_g,
        total_bound: sum_f_bound + sum_g,
        coarse_total_bound: 2.0 * head + sum_g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_solution_without_g() {
        let r = bound_chain(1.0 / 9.0, &[0.0; 12], 9.0);
        assert!(r.applicable);
        for (n, f) in r.f_bounds.iter().enumerate() {
            let exact = 9f64.powi(-(n as i32) - 2);
            assert!((f - exact).abs() <= 4.0 * f64::EPSILON * exact);
        }
        assert!((r.sum_f_bound - 1.0 / 72.0).abs() < 1e-17);
    }

    #[test]
    fn worst_case_budget() {
        let r = bound_chain(1.0 / 9.0, &[1.0 / 81.0], 9.0);
        assert!(r.applicable);
        assert!((r.coarse_total_bound - 5.0 / 81.0).abs() < 1e-16);
        assert!(r.total_bound <= r.coarse_total_bound);
    }

    #[test]
    fn precondition_gates() {
        assert!(!bound_chain(0.2, &[], 9.0).applicable);
        assert!(!bound_chain(0.1, &[0.02], 9.0).applicable);
        assert!(!bound_chain(0.1, &[-0.001], 9.0).applicable);
    }
}
