//! Strips and the 74-rectangle knitting layout used by the one-step
//! renormalization inequality.
//!
//! Rectangles `R_1..R_19` are horizontal `10α × α` tiles along the thin band
//! `T = [-50α, 50α] × [-4.5α, -3.5α]`; `R_20..R_37` are vertical `α × 10α`
//! bridges between consecutive tiles. `R_38..R_74` mirror them across the
//! x-axis. Each rectangle carries a reach disc of radius `κα` about its
//! centre.

use serde::{Deserialize, Serialize};

use super::shapes::{Orientation, Point, Rect, Region};
use crate::error::{invalid, require_positive, Result};

/// Reach factor that reproduces the original construction exactly.
pub const DEFAULT_REACH_FACTOR: f64 = 1e6;

/// Number of rectangles in each half of the layout.
pub const HALF_LAYOUT: usize = 37;

/// Horizontal tiles per half.
pub const TILES_PER_HALF: usize = 19;

/// A `10α × α` (horizontal) or `α × 10α` (vertical) rectangle centred at
/// `center`.
pub fn make_strip(alpha: f64, orientation: Orientation, center: Point) -> Result<Rect> {
    require_positive("alpha", alpha)?;
    let (w, h) = match orientation {
        Orientation::Horizontal => (10.0 * alpha, alpha),
        Orientation::Vertical => (alpha, 10.0 * alpha),
    };
    Rect::centered(center, w, h)
}

/// The horizontal strip `S(α) = [-5α, 5α] × [-α/2, α/2]`.
pub fn strip(alpha: f64) -> Result<Rect> {
    make_strip(alpha, Orientation::Horizontal, Point::ORIGIN)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutRect {
    /// 1-based index `i` of `R_i`.
    pub index: usize,
    pub orientation: Orientation,
    pub rect: Rect,
    pub disc_center: Point,
    pub disc_radius: f64,
}

impl LayoutRect {
    /// `(R_i)_α`.
    pub fn neighborhood(&self, alpha: f64) -> Region {
        Region::Neighborhood {
            rect: self.rect,
            radius: alpha,
        }
    }

    /// `D_i \ (R_i)_α`, the source region of the reach event `A_i`.
    pub fn reach_annulus(&self, alpha: f64) -> Result<Region> {
        Region::difference(
            Region::disc(self.disc_center, self.disc_radius)?,
            self.neighborhood(alpha),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Layout {
    pub alpha: f64,
    pub reach_factor: f64,
    /// `S(10α)`.
    pub parent: Rect,
    /// `T`, the lower thin band.
    pub lower_band: Rect,
    /// `T̃`, the upper thin band.
    pub upper_band: Rect,
    /// `R_1..R_74` in index order.
    pub rects: Vec<LayoutRect>,
}

impl Lemma1Layout {
    pub fn rect(&self, index: usize) -> &LayoutRect {
        &self.rects[index - 1]
    }

    /// Rectangles of the lower (`upper = false`) or upper half.
    pub fn half(&self, upper: bool) -> &[LayoutRect] {
        if upper {
            &self.rects[HALF_LAYOUT..]
        } else {
            &self.rects[..HALF_LAYOUT]
        }
    }

    /// `(S(10α))_{10α}`.
    pub fn parent_neighborhood(&self) -> Region {
        Region::Neighborhood {
            rect: self.parent,
            radius: 10.0 * self.alpha,
        }
    }
}

pub fn build_lemma1_layout(alpha: f64, reach_factor: f64) -> Result<Lemma1Layout> {
    require_positive("alpha", alpha)?;
    if !(reach_factor.is_finite() && reach_factor >= 10.0) {
        return Err(invalid("reach_factor", format!("must be >= 10, got {reach_factor}")));
    }
    let disc_radius = reach_factor * alpha;
    let mut rects = Vec::with_capacity(2 * HALF_LAYOUT);
    let mut push = |orientation, center: Point| -> Result<()> {
        let rect = make_strip(alpha, orientation, center)?;
        rects.push(LayoutRect {
            index: rects.len() + 1,
            orientation,
            rect,
            disc_center: center,
            disc_radius,
        });
        Ok(())
    };
    for i in 0..TILES_PER_HALF {
        let x = (-45.0 + 5.0 * i as f64) * alpha;
        push(Orientation::Horizontal, Point::new(x, -4.0 * alpha))?;
    }
    for j in 0..HALF_LAYOUT - TILES_PER_HALF {
        let x = (-42.5 + 5.0 * j as f64) * alpha;
        push(Orientation::Vertical, Point::new(x, -7.0 * alpha))?;
    }
    for i in 0..HALF_LAYOUT {
        let r = rects[i].clone();
        rects.push(LayoutRect {
            index: HALF_LAYOUT + i + 1,
            orientation: r.orientation,
            rect: r.rect.reflected_x_axis(),
            disc_center: Point::new(r.disc_center.x, -r.disc_center.y),
            disc_radius,
        });
    }
    let lower_band = Rect::from_bounds(-50.0 * alpha, 50.0 * alpha, -4.5 * alpha, -3.5 * alpha)?;
    Ok(Lemma1Layout {
        alpha,
        reach_factor,
        parent: strip(10.0 * alpha)?,
        lower_band,
        upper_band: lower_band.reflected_x_axis(),
        rects,
    })
}

/// Every violated structural invariant of the layout, as text: tile and
/// bridge sizes and centres, mirror symmetry, bands, reach discs,
/// containment of each `(R_i)_α` in its half of `(S(10α))_{10α}`, and
/// disjointness of the lower and upper neighbourhoods.
pub fn layout_violations(layout: &Lemma1Layout) -> Vec<String> {
    let a = layout.alpha;
    let mut out = Vec::new();
    if layout.rects.len() != 2 * HALF_LAYOUT {
        out.push(format!("expected {} rectangles, found {}", 2 * HALF_LAYOUT, layout.rects.len()));
        return out;
    }
    let mut expect = |i: usize, orientation: Orientation, center: Point| {
        let r = layout.rect(i);
        match make_strip(a, orientation, center) {
            Ok(want) if r.rect == want && r.orientation == orientation => {}
            _ => out.push(format!("R_{i} is {:?}, expected {orientation:?} strip at {center:?}", r.rect)),
        }
        if r.disc_center.dist(r.rect.center()) > 1e-12 * a * 50.0 || r.disc_radius != layout.reach_factor * a {
            out.push(format!("D_{i} is not the κα disc about the centre of R_{i}"));
        }
    };
    for i in 0..TILES_PER_HALF {
        expect(i + 1, Orientation::Horizontal, Point::new((-45.0 + 5.0 * i as f64) * a, -4.0 * a));
    }
    for j in 0..HALF_LAYOUT - TILES_PER_HALF {
        expect(TILES_PER_HALF + j + 1, Orientation::Vertical, Point::new((-42.5 + 5.0 * j as f64) * a, -7.0 * a));
    }
    for i in 1..=HALF_LAYOUT {
        if layout.rect(HALF_LAYOUT + i).rect != layout.rect(i).rect.reflected_x_axis() {
            out.push(format!("R_{} is not the mirror image of R_{i}", HALF_LAYOUT + i));
        }
    }
    match Rect::from_bounds(-50.0 * a, 50.0 * a, -4.5 * a, -3.5 * a) {
        Ok(t) if t == layout.lower_band && t.reflected_x_axis() == layout.upper_band => {}
        _ => out.push("bands differ from [-50α, 50α] x [-4.5α, -3.5α] and its mirror".to_owned()),
    }
    let parent = layout.parent_neighborhood();
    for r in &layout.rects {
        let n = r.neighborhood(a);
        let lower = r.index <= HALF_LAYOUT;
        let half_ok = if lower { n.bbox().hi.y <= 0.0 } else { n.bbox().lo.y >= 0.0 };
        if !parent.encloses(&n) || !half_ok {
            out.push(format!("(R_{})_α leaves its half of the parent neighbourhood", r.index));
        }
    }
    for lo in layout.half(false) {
        for hi in layout.half(true) {
            if lo.rect.gap(&hi.rect) <= 2.0 * a {
                out.push(format!("(R_{})_α meets (R_{})_α", lo.index, hi.index));
            }
        }
    }
    out
}

/// One tile/bridge/tile junction of the knitting chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Junction {
    pub left: usize,
    pub right: usize,
    pub bridge: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnittingReport {
    pub junctions: Vec<Junction>,
    /// The tiles of each half reach both short ends of their band.
    pub lower_ends_covered: bool,
    pub upper_ends_covered: bool,
    pub pass: bool,
}

impl KnittingReport {
    pub fn failed(&self) -> Vec<&Junction> {
        self.junctions.iter().filter(|j| !j.pass).collect()
    }
}

/// `bridge ∩ tile` spans the bridge's full width and the tile's full height,
/// so a long-way crossing of the tile meets a long-way crossing of the
/// bridge.
fn bridge_spans_tile(bridge: &Rect, tile: &Rect) -> bool {
    match bridge.intersection(tile) {
        Some(o) => {
            o.lo.x == bridge.lo.x && o.hi.x == bridge.hi.x && o.lo.y == tile.lo.y && o.hi.y == tile.hi.y
        }
        None => false,
    }
}

/// Checks every junction `(R_i, R_{19+i}, R_{i+1})` of both halves: the
/// tile lies in its band and the bridge overlap spans both neighbouring
/// tiles, and the first and last tile reach the band's short ends.
pub fn verify_knitting(layout: &Lemma1Layout) -> KnittingReport {
    // Tiles are built from their centres and bands from their bounds, so
    // shared edges agree only up to rounding at the layout's scale.
    let tol = 64.0 * f64::EPSILON * 50.0 * layout.alpha;
    let close = |a: f64, b: f64| (a - b).abs() <= tol;
    let mut junctions = Vec::new();
    let mut ends = [false; 2];
    for (h, upper) in [false, true].into_iter().enumerate() {
        let half = layout.half(upper);
        let band = if upper { layout.upper_band } else { layout.lower_band };
        let tiles = &half[..TILES_PER_HALF];
        let bridges = &half[TILES_PER_HALF..];
        for i in 0..TILES_PER_HALF - 1 {
            let (l, r, b) = (&tiles[i], &tiles[i + 1], &bridges[i]);
            let in_band = |t: &LayoutRect| {
                band.expanded(tol).contains_rect(&t.rect) && close(t.rect.lo.y, band.lo.y) && close(t.rect.hi.y, band.hi.y)
            };
            let pass = in_band(l)
                && in_band(r)
                && bridge_spans_tile(&b.rect, &l.rect)
                && bridge_spans_tile(&b.rect, &r.rect);
            junctions.push(Junction {
                left: l.index,
                right: r.index,
                bridge: b.index,
                pass,
            });
        }
        ends[h] = tiles[0].rect.lo.x <= band.lo.x + tol && tiles[TILES_PER_HALF - 1].rect.hi.x >= band.hi.x - tol;
    }
    let pass = ends[0] && ends[1] && junctions.iter().all(|j| j.pass);
    KnittingReport {
        junctions,
        lower_ends_covered: ends[0],
        upper_ends_covered: ends[1],
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips() {
        assert_eq!(strip(1.0).unwrap(), Rect::from_bounds(-5.0, 5.0, -0.5, 0.5).unwrap());
        assert_eq!(
            make_strip(1.0, Orientation::Vertical, Point::ORIGIN).unwrap(),
            Rect::from_bounds(-0.5, 0.5, -5.0, 5.0).unwrap()
        );
        assert_eq!(strip(10.0).unwrap(), Rect::from_bounds(-50.0, 50.0, -5.0, 5.0).unwrap());
        assert!(strip(0.0).is_err());
    }

    #[test]
    fn layout_coordinates() {
        let l = build_lemma1_layout(1.0, 1e6).unwrap();
        assert_eq!(l.rects.len(), 74);
        assert_eq!(l.rect(1).rect, Rect::from_bounds(-50.0, -40.0, -4.5, -3.5).unwrap());
        assert_eq!(l.rect(19).rect, Rect::from_bounds(40.0, 50.0, -4.5, -3.5).unwrap());
        assert_eq!(l.rect(20).rect, Rect::from_bounds(-43.0, -42.0, -12.0, -2.0).unwrap());
        assert_eq!(l.rect(37).rect, Rect::from_bounds(42.0, 43.0, -12.0, -2.0).unwrap());
        assert_eq!(l.rect(38).rect, Rect::from_bounds(-50.0, -40.0, 3.5, 4.5).unwrap());
        assert_eq!(l.rect(5).disc_radius, 1e6);
    }

    #[test]
    fn invariants_hold_and_detect_damage() {
        for alpha in [1.0, 2.5, 8.0, 1e6] {
            let l = build_lemma1_layout(alpha, 1e3).unwrap();
            assert!(layout_violations(&l).is_empty(), "{:?}", layout_violations(&l));
        }
        let mut l = build_lemma1_layout(1.0, 1e3).unwrap();
        l.rects[40].rect = l.rects[40].rect.translated(0.5, 0.0);
        assert!(!layout_violations(&l).is_empty());
    }

    #[test]
    fn knitting_passes_for_default_layout() {
        let report = verify_knitting(&build_lemma1_layout(1.0, 1e6).unwrap());
        assert_eq!(report.junctions.len(), 36);
        assert!(report.pass);
    }

    #[test]
    fn shifted_bridge_breaks_first_junction() {
        let mut l = build_lemma1_layout(1.0, 1e3).unwrap();
        l.rects[19].rect = l.rects[19].rect.translated(0.0, 9.0);
        let report = verify_knitting(&l);
        assert!(!report.pass);
        let failed = report.failed();
        assert_eq!(failed.len(), 1);
        assert_eq!((failed[0].left, failed[0].bridge), (1, 20));
    }

    #[test]
    fn wide_spacing_breaks_knitting() {
        let alpha = 1.0;
        let mut l = build_lemma1_layout(alpha, 1e3).unwrap();
        for i in 0..TILES_PER_HALF {
            let x = -45.0 + 10.0 * i as f64;
            l.rects[i].rect = make_strip(alpha, Orientation::Horizontal, Point::new(x, -4.0)).unwrap();
        }
        assert!(!verify_knitting(&l).pass);
    }
}
