//! Diameters of a seed set together with the grain components it touches.

use std::collections::VecDeque;

use super::grid::GrainIndex;
use crate::geometry::{disc_meets_rect, discs_overlap, Point, Rect};
use crate::model::Grain;

/// Grain indices whose component meets `seed` (a rectangle, possibly a
/// degenerate one such as a unit segment), in discovery order.
pub fn seed_component(grains: &[Grain], seed: &Rect) -> Vec<usize> {
    let index = GrainIndex::build(grains, 0.0);
    let mut seen = vec![false; grains.len()];
    let mut queue = VecDeque::new();
    index.for_each_near_rect(seed, |i| {
        if !seen[i] && disc_meets_rect(&grains[i], seed) {
            seen[i] = true;
            queue.push_back(i);
        }
    });
    let mut out = Vec::new();
    while let Some(i) = queue.pop_front() {
        out.push(i);
        index.for_each_near_rect(&grains[i].bbox(), |j| {
            if !seen[j] && discs_overlap(&grains[i], &grains[j]) {
                seen[j] = true;
                queue.push_back(j);
            }
        });
    }
    out
}

/// Diameter of a finite union of discs (points are zero-radius discs):
/// the maximum of `|c_i - c_j| + r_i + r_j` over all pairs, including i = j.
pub fn union_diameter(discs: &[(Point, f64)]) -> f64 {
    if discs.is_empty() {
        return 0.0;
    }
    let r_max = discs.iter().map(|d| d.1).fold(0.0, f64::max);
    let (mut lo, mut hi) = (discs[0].0, discs[0].0);
    for (c, _) in discs {
        lo = Point::new(lo.x.min(c.x), lo.y.min(c.y));
        hi = Point::new(hi.x.max(c.x), hi.y.max(c.y));
    }
    let hull = Rect { lo, hi };
    // Bound on any pair involving disc i, used to order and prune the scan.
    let mut order: Vec<(f64, usize)> = discs
        .iter()
        .enumerate()
        .map(|(i, (c, r))| (hull.far_dist(*c) + r + r_max, i))
        .collect();
    order.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = 2.0 * r_max;
    for &(bound, i) in &order {
        if bound <= best {
            break;
        }
        let (ci, ri) = discs[i];
        for &(cj, rj) in discs {
            best = best.max(ci.dist(cj) + ri + rj);
        }
    }
    best
}

/// `D(seed ∪ components meeting seed)`; `D` of the bare seed when no grain
/// touches it.
pub fn component_diameter(grains: &[Grain], seed: &Rect) -> f64 {
    let mut discs: Vec<(Point, f64)> = seed.corners().iter().map(|&c| (c, 0.0)).collect();
    discs.extend(
        seed_component(grains, seed)
            .into_iter()
            .map(|i| (grains[i].center, grains[i].radius)),
    );
    union_diameter(&discs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_segment() {
        assert_eq!(component_diameter(&[], &Rect::unit_interval(0)), 1.0);
    }

    #[test]
    fn disc_containing_the_segment() {
        let grains = [Grain::new(Point::new(0.5, 0.0), 2.0)];
        assert!((component_diameter(&grains, &Rect::unit_interval(0)) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn disc_sticking_out_of_segment() {
        let grains = [Grain::new(Point::new(0.0, 0.0), 0.25)];
        assert!((component_diameter(&grains, &Rect::unit_interval(0)) - 1.25).abs() < 1e-12);
    }

    #[test]
    fn far_grain_excluded() {
        let grains = [
            Grain::new(Point::new(0.5, 0.5), 1.0),
            Grain::new(Point::new(50.0, 0.0), 1.0),
        ];
        let d = component_diameter(&grains, &Rect::unit_interval(0));
        assert!((d - 2.0).abs() < 1e-12, "{d}");
    }

    #[test]
    fn pruned_scan_matches_full_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let discs: Vec<(Point, f64)> = (0..60)
                .map(|_| {
                    let c = Point::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
                    (c, rng.random_range(0.0..3.0))
                })
                .collect();
            let mut full: f64 = 0.0;
            for a in &discs {
                for b in &discs {
                    full = full.max(a.0.dist(b.0) + a.1 + b.1);
                }
            }
            assert_eq!(union_diameter(&discs), full);
        }
    }
}
