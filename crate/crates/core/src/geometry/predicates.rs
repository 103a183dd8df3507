//! Exact predicates on closed discs, segments and rectangles.
//!
//! Every comparison is widened by [`BOUNDARY_TOL`]: configurations within
//! that absolute distance of a tangency are classified as touching, which
//! biases connectivity decisions toward "connected" on a measure-zero set.

use super::shapes::{Point, Rect, Segment};
use crate::model::Grain;

pub const BOUNDARY_TOL: f64 = 1e-12;

pub fn discs_overlap(a: &Grain, b: &Grain) -> bool {
    let reach = a.radius + b.radius + BOUNDARY_TOL;
    a.center.dist_sq(b.center) <= reach * reach
}

pub fn disc_meets_rect(g: &Grain, rect: &Rect) -> bool {
    rect.dist(g.center) <= g.radius + BOUNDARY_TOL
}

pub fn disc_meets_segment(g: &Grain, edge: &Segment) -> bool {
    edge.dist(g.center) <= g.radius + BOUNDARY_TOL
}

pub fn disc_contains_point(g: &Grain, p: Point) -> bool {
    g.center.dist(p) <= g.radius + BOUNDARY_TOL
}

/// Parameter range `[t0, t1]` of `a + t (b - a)` lying in the closed disc.
fn segment_disc_interval(edge: &Segment, g: &Grain) -> Option<(f64, f64)> {
    let d = Point::new(edge.b.x - edge.a.x, edge.b.y - edge.a.y);
    let f = Point::new(edge.a.x - g.center.x, edge.a.y - g.center.y);
    let r = g.radius + BOUNDARY_TOL;
    let qa = d.x * d.x + d.y * d.y;
    let qb = 2.0 * (f.x * d.x + f.y * d.y);
    let qc = f.x * f.x + f.y * f.y - r * r;
    if qa == 0.0 {
        return (qc <= 0.0).then_some((0.0, 1.0));
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    // Numerically stable roots.
    let sign = if qb >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (qb + sign * s);
    let (mut t0, mut t1) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        let r1 = q / qa;
        let r2 = qc / q;
        (r1.min(r2), r1.max(r2))
    };
    t0 = t0.max(0.0);
    t1 = t1.min(1.0);
    (t0 <= t1).then_some((t0, t1))
}

/// Whether the lens `B(c1, r1) ∩ B(c2, r2)` meets a closed segment.
pub fn lens_meets_segment(a: &Grain, b: &Grain, edge: &Segment) -> bool {
    match (segment_disc_interval(edge, a), segment_disc_interval(edge, b)) {
        (Some((a0, a1)), Some((b0, b1))) => a0.max(b0) <= a1.min(b1),
        _ => false,
    }
}

/// A point inside both discs, assuming they overlap.
fn lens_point(a: &Grain, b: &Grain) -> Point {
    let d = a.center.dist(b.center);
    if d <= (a.radius - b.radius).abs() {
        return if a.radius <= b.radius { a.center } else { b.center };
    }
    let t = ((d + a.radius - b.radius) / 2.0 / d).clamp(0.0, 1.0);
    Point::new(
        a.center.x + t * (b.center.x - a.center.x),
        a.center.y + t * (b.center.y - a.center.y),
    )
}

/// Decides `B(c1, r1) ∩ B(c2, r2) ∩ rect ≠ ∅`.
///
/// The lens is convex and connected, so it meets the rectangle iff it meets
/// one of the four edges or lies in the rectangle's interior, in which case
/// any lens point is inside.
pub fn lens_meets_rect(a: &Grain, b: &Grain, rect: &Rect) -> bool {
    if !discs_overlap(a, b) || !disc_meets_rect(a, rect) || !disc_meets_rect(b, rect) {
        return false;
    }
    if rect.dist(lens_point(a, b)) <= BOUNDARY_TOL {
        return true;
    }
    rect.edges().iter().any(|e| lens_meets_segment(a, b, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: f64, y: f64, r: f64) -> Grain {
        Grain::new(Point::new(x, y), r)
    }

    #[test]
    fn tangent_discs_overlap() {
        assert!(discs_overlap(&g(0.0, 0.0, 1.0), &g(2.0, 0.0, 1.0)));
        assert!(!discs_overlap(&g(0.0, 0.0, 1.0), &g(2.0 + 1e-9, 0.0, 1.0)));
    }

    #[test]
    fn disc_centered_in_rect_meets_it() {
        let r = Rect::from_bounds(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(disc_meets_rect(&g(0.5, 0.5, 0.01), &r));
        assert!(!disc_meets_rect(&g(3.0, 3.0, 1.0), &r));
    }

    #[test]
    fn far_lens_misses_rect() {
        let rect = Rect::from_bounds(0.5, 1.0, 5.0, 6.0).unwrap();
        assert!(!lens_meets_rect(&g(0.0, 0.0, 1.0), &g(1.5, 0.0, 1.0), &rect));
    }

    #[test]
    fn lens_meets_rect_through_edge_only() {
        // Lens around (0.75, 0) with half-height sqrt(1 - 0.75^2) ~ 0.661.
        let a = g(0.0, 0.0, 1.0);
        let b = g(1.5, 0.0, 1.0);
        let above = Rect::from_bounds(0.7, 0.8, 0.6, 2.0).unwrap();
        assert!(lens_meets_rect(&a, &b, &above));
        let too_high = Rect::from_bounds(0.7, 0.8, 0.7, 2.0).unwrap();
        assert!(!lens_meets_rect(&a, &b, &too_high));
        // Both discs meet this rectangle but the lens does not.
        let side = Rect::from_bounds(-0.2, 1.7, 0.9, 1.0).unwrap();
        assert!(disc_meets_rect(&a, &side) && disc_meets_rect(&b, &side));
        assert!(!lens_meets_rect(&a, &b, &side));
    }

    #[test]
    fn nested_discs_lens_is_small_disc() {
        let big = g(0.0, 0.0, 5.0);
        let small = g(1.0, 0.0, 0.5);
        let rect = Rect::from_bounds(0.9, 1.1, -0.1, 0.1).unwrap();
        assert!(lens_meets_rect(&big, &small, &rect));
        let away = Rect::from_bounds(3.0, 4.0, 0.0, 1.0).unwrap();
        assert!(!lens_meets_rect(&big, &small, &away));
    }

    #[test]
    fn segment_tests() {
        let e = Segment::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        assert!(disc_meets_segment(&g(0.5, 1.0, 1.0), &e));
        assert!(!disc_meets_segment(&g(2.5, 0.0, 1.0), &e));
        assert!(lens_meets_segment(&g(-0.5, 0.0, 1.0), &g(1.5, 0.0, 1.0), &e));
        assert!(!lens_meets_segment(&g(-0.5, 0.0, 0.6), &g(1.5, 0.0, 0.6), &e));
    }
}
