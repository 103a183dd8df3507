//! Points, axis-aligned rectangles and the composite planar regions used as
//! sampling windows: discs, rounded-rectangle neighbourhoods and nested set
//! differences of these.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_non_negative, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Horizontal => Orientation::Vertical,
            Orientation::Vertical => Orientation::Horizontal,
        }
    }
}

/// Closed straight segment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn dist(&self, p: Point) -> f64 {
        let (dx, dy) = (self.b.x - self.a.x, self.b.y - self.a.y);
        let len_sq = dx * dx + dy * dy;
        if len_sq == 0.0 {
            return p.dist(self.a);
        }
        let t = (((p.x - self.a.x) * dx + (p.y - self.a.y) * dy) / len_sq).clamp(0.0, 1.0);
        p.dist(Point::new(self.a.x + t * dx, self.a.y + t * dy))
    }
}

/// Closed axis-aligned rectangle `[lo.x, hi.x] x [lo.y, hi.y]`.
///
/// Degenerate rectangles (zero width or height) are allowed so that unit
/// segments on the x-axis can share the same distance machinery.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub lo: Point,
    pub hi: Point,
}

impl Rect {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        let finite = [lo.x, lo.y, hi.x, hi.y].iter().all(|v| v.is_finite());
        if !finite || lo.x > hi.x || lo.y > hi.y {
            return Err(invalid(
                "rect",
                format!("corners must be finite with lo <= hi, got {lo:?} / {hi:?}"),
            ));
        }
        Ok(Self { lo, hi })
    }

    pub fn from_bounds(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        Self::new(Point::new(x0, y0), Point::new(x1, y1))
    }

    pub fn centered(center: Point, width: f64, height: f64) -> Result<Self> {
        require_non_negative("width", width)?;
        require_non_negative("height", height)?;
        Self::new(
            Point::new(center.x - width / 2.0, center.y - height / 2.0),
            Point::new(center.x + width / 2.0, center.y + height / 2.0),
        )
    }

    /// The horizontal unit segment `[k, k+1] x {0}`.
    pub fn unit_interval(k: i64) -> Self {
        let x = k as f64;
        Self {
            lo: Point::new(x, 0.0),
            hi: Point::new(x + 1.0, 0.0),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi.x - self.lo.x
    }

    pub fn height(&self) -> f64 {
        self.hi.y - self.lo.y
    }

    pub fn short_side(&self) -> f64 {
        self.width().min(self.height())
    }

    pub fn long_side(&self) -> f64 {
        self.width().max(self.height())
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * (self.width() + self.height())
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.lo.x + self.hi.x), 0.5 * (self.lo.y + self.hi.y))
    }

    /// Horizontal when at least as wide as tall.
    pub fn orientation(&self) -> Orientation {
        if self.width() >= self.height() {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.lo.x && p.x <= self.hi.x && p.y >= self.lo.y && p.y <= self.hi.y
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.lo.x >= self.lo.x
            && other.hi.x <= self.hi.x
            && other.lo.y >= self.lo.y
            && other.hi.y <= self.hi.y
    }

    /// Euclidean distance from `p` to the rectangle (zero inside).
    pub fn dist(&self, p: Point) -> f64 {
        let dx = (self.lo.x - p.x).max(p.x - self.hi.x).max(0.0);
        let dy = (self.lo.y - p.y).max(p.y - self.hi.y).max(0.0);
        dx.hypot(dy)
    }

    /// Largest distance from `p` to a point of the rectangle.
    pub fn far_dist(&self, p: Point) -> f64 {
        let dx = (p.x - self.lo.x).abs().max((p.x - self.hi.x).abs());
        let dy = (p.y - self.lo.y).abs().max((p.y - self.hi.y).abs());
        dx.hypot(dy)
    }

    /// The point of the rectangle nearest to `p`.
    pub fn clamp(&self, p: Point) -> Point {
        Point::new(p.x.clamp(self.lo.x, self.hi.x), p.y.clamp(self.lo.y, self.hi.y))
    }

    /// Gap distance between two rectangles (zero if they meet).
    pub fn gap(&self, other: &Rect) -> f64 {
        let dx = (other.lo.x - self.hi.x).max(self.lo.x - other.hi.x).max(0.0);
        let dy = (other.lo.y - self.hi.y).max(self.lo.y - other.hi.y).max(0.0);
        dx.hypot(dy)
    }

    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let lo = Point::new(self.lo.x.max(other.lo.x), self.lo.y.max(other.lo.y));
        let hi = Point::new(self.hi.x.min(other.hi.x), self.hi.y.min(other.hi.y));
        (lo.x <= hi.x && lo.y <= hi.y).then_some(Rect { lo, hi })
    }

    /// Bounding box of the `r`-neighbourhood.
    pub fn expanded(&self, r: f64) -> Rect {
        Rect {
            lo: Point::new(self.lo.x - r, self.lo.y - r),
            hi: Point::new(self.hi.x + r, self.hi.y + r),
        }
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Rect {
        Rect {
            lo: Point::new(self.lo.x + dx, self.lo.y + dy),
            hi: Point::new(self.hi.x + dx, self.hi.y + dy),
        }
    }

    /// Mirror image across the x-axis.
    pub fn reflected_x_axis(&self) -> Rect {
        Rect {
            lo: Point::new(self.lo.x, -self.hi.y),
            hi: Point::new(self.hi.x, -self.lo.y),
        }
    }

    /// Image under `(x, y) -> (s x, s y)`.
    pub fn scaled(&self, s: f64) -> Rect {
        Rect {
            lo: Point::new(self.lo.x * s, self.lo.y * s),
            hi: Point::new(self.hi.x * s, self.hi.y * s),
        }
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            self.lo,
            Point::new(self.hi.x, self.lo.y),
            self.hi,
            Point::new(self.lo.x, self.hi.y),
        ]
    }

    pub fn bottom_edge(&self) -> Segment {
        Segment::new(self.lo, Point::new(self.hi.x, self.lo.y))
    }

    pub fn top_edge(&self) -> Segment {
        Segment::new(Point::new(self.lo.x, self.hi.y), self.hi)
    }

    pub fn left_edge(&self) -> Segment {
        Segment::new(self.lo, Point::new(self.lo.x, self.hi.y))
    }

    pub fn right_edge(&self) -> Segment {
        Segment::new(Point::new(self.hi.x, self.lo.y), self.hi)
    }

    pub fn edges(&self) -> [Segment; 4] {
        [self.bottom_edge(), self.right_edge(), self.top_edge(), self.left_edge()]
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        Point::new(
            self.lo.x + rng.random::<f64>() * self.width(),
            self.lo.y + rng.random::<f64>() * self.height(),
        )
    }
}

/// Planar sampling region.
///
/// `Difference(outer, hole)` requires `hole` to sit inside `outer`; the
/// constructor [`Region::difference`] checks this so the area is simply
/// `area(outer) - area(hole)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Rect(Rect),
    Disc { center: Point, radius: f64 },
    Neighborhood { rect: Rect, radius: f64 },
    Difference { outer: Box<Region>, hole: Box<Region> },
}

impl From<Rect> for Region {
    fn from(rect: Rect) -> Self {
        Region::Rect(rect)
    }
}

impl Region {
    pub fn disc(center: Point, radius: f64) -> Result<Self> {
        require_non_negative("radius", radius)?;
        Ok(Region::Disc { center, radius })
    }

    /// The closed `radius`-neighbourhood `A_r` of a rectangle: a rectangle
    /// with rounded corners. `radius = 0` yields the rectangle itself.
    pub fn neighborhood(rect: Rect, radius: f64) -> Result<Self> {
        require_non_negative("radius", radius)?;
        if radius == 0.0 {
            Ok(Region::Rect(rect))
        } else {
            Ok(Region::Neighborhood { rect, radius })
        }
    }

    pub fn difference(outer: Region, hole: Region) -> Result<Self> {
        if !outer.encloses(&hole) {
            return Err(invalid("region", "hole of a difference must lie inside the outer region"));
        }
        Ok(Region::Difference {
            outer: Box::new(outer),
            hole: Box::new(hole),
        })
    }

    pub fn area(&self) -> f64 {
        match self {
            Region::Rect(r) => r.area(),
            Region::Disc { radius, .. } => PI * radius * radius,
            Region::Neighborhood { rect, radius } => {
                rect.area() + rect.perimeter() * radius + PI * radius * radius
            }
            Region::Difference { outer, hole } => (outer.area() - hole.area()).max(0.0),
        }
    }

    pub fn bbox(&self) -> Rect {
        match self {
            Region::Rect(r) => *r,
            Region::Disc { center, radius } => Rect {
                lo: Point::new(center.x - radius, center.y - radius),
                hi: Point::new(center.x + radius, center.y + radius),
            },
            Region::Neighborhood { rect, radius } => rect.expanded(*radius),
            Region::Difference { outer, .. } => outer.bbox(),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Region::Rect(r) => r.contains(p),
            Region::Disc { center, radius } => p.dist_sq(*center) <= radius * radius,
            Region::Neighborhood { rect, radius } => rect.dist(p) <= *radius,
            Region::Difference { outer, hole } => outer.contains(p) && !hole.contains(p),
        }
    }

    /// Largest distance from `p` to a point of the region.
    fn far_dist(&self, p: Point) -> f64 {
        match self {
            Region::Rect(r) => r.far_dist(p),
            Region::Disc { center, radius } => p.dist(*center) + radius,
            Region::Neighborhood { rect, radius } => rect.far_dist(p) + radius,
            Region::Difference { outer, .. } => outer.far_dist(p),
        }
    }

    /// Supremum of `dist(x, rect)` over points `x` of the region.
    fn max_dist_from(&self, rect: &Rect) -> f64 {
        match self {
            Region::Rect(r) => r.corners().iter().map(|c| rect.dist(*c)).fold(0.0, f64::max),
            Region::Disc { center, radius } => rect.dist(*center) + radius,
            Region::Neighborhood { rect: inner, radius } => {
                Region::Rect(*inner).max_dist_from(rect) + radius
            }
            Region::Difference { outer, .. } => outer.max_dist_from(rect),
        }
    }

    /// Conservative containment test used to validate differences (exact for
    /// every pair of non-difference shapes).
    pub fn encloses(&self, other: &Region) -> bool {
        match self {
            Region::Rect(r) => r.contains_rect(&other.bbox()),
            Region::Disc { center, radius } => other.far_dist(*center) <= *radius,
            Region::Neighborhood { rect, radius } => other.max_dist_from(rect) <= *radius,
            Region::Difference { outer, .. } => outer.encloses(other),
        }
    }

    /// Closed x-intervals of the horizontal line at height `y` inside the
    /// region, sorted and disjoint.
    pub fn slice_x(&self, y: f64) -> Vec<(f64, f64)> {
        match self {
            Region::Rect(r) => {
                if y >= r.lo.y && y <= r.hi.y {
                    vec![(r.lo.x, r.hi.x)]
                } else {
                    Vec::new()
                }
            }
            Region::Disc { center, radius } => {
                let dy = y - center.y;
                let h2 = radius * radius - dy * dy;
                if h2 < 0.0 {
                    Vec::new()
                } else {
                    let h = h2.sqrt();
                    vec![(center.x - h, center.x + h)]
                }
            }
            Region::Neighborhood { rect, radius } => {
                let dy = (rect.lo.y - y).max(y - rect.hi.y).max(0.0);
                if dy > *radius {
                    Vec::new()
                } else {
                    let h = (radius * radius - dy * dy).sqrt();
                    vec![(rect.lo.x - h, rect.hi.x + h)]
                }
            }
            Region::Difference { outer, hole } => {
                subtract_intervals(&outer.slice_x(y), &hole.slice_x(y))
            }
        }
    }

    /// Heights at which [`Region::slice_x`] changes analytically (kinks of the
    /// interval endpoints as functions of `y`).
    pub fn y_breakpoints(&self) -> Vec<f64> {
        match self {
            Region::Rect(r) => vec![r.lo.y, r.hi.y],
            Region::Disc { center, radius } => vec![center.y - radius, center.y, center.y + radius],
            Region::Neighborhood { rect, radius } => vec![
                rect.lo.y - radius,
                rect.lo.y,
                rect.hi.y,
                rect.hi.y + radius,
            ],
            Region::Difference { outer, hole } => {
                let mut v = outer.y_breakpoints();
                v.extend(hole.y_breakpoints());
                v
            }
        }
    }

    /// A lower bound on `dist(x, target)` over points `x` of the region.
    pub fn min_dist_to(&self, target: &Rect) -> f64 {
        match self {
            Region::Rect(r) => r.gap(target),
            Region::Disc { center, radius } => (target.dist(*center) - radius).max(0.0),
            Region::Neighborhood { rect, radius } => (rect.gap(target) - radius).max(0.0),
            Region::Difference { outer, hole } => {
                outer.min_dist_to(target).max(hole.clearance(target))
            }
        }
    }

    /// A lower bound on `dist(x, target)` over points `x` outside the region.
    fn clearance(&self, target: &Rect) -> f64 {
        let inner_margin = |r: &Rect| {
            if r.contains_rect(target) {
                (target.lo.x - r.lo.x)
                    .min(r.hi.x - target.hi.x)
                    .min(target.lo.y - r.lo.y)
                    .min(r.hi.y - target.hi.y)
            } else {
                0.0
            }
        };
        match self {
            Region::Rect(r) => inner_margin(r),
            Region::Disc { center, radius } => (radius - target.far_dist(*center)).max(0.0),
            Region::Neighborhood { rect, radius } => {
                if rect.contains_rect(target) {
                    radius + inner_margin(rect)
                } else {
                    0.0
                }
            }
            Region::Difference { .. } => 0.0,
        }
    }

    /// Uniform point of the region (rejection from the outer shape where no
    /// direct construction exists).
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            Region::Rect(r) => r.sample_uniform(rng),
            Region::Disc { center, radius } => {
                let r = radius * rng.random::<f64>().sqrt();
                let theta = 2.0 * PI * rng.random::<f64>();
                Point::new(center.x + r * theta.cos(), center.y + r * theta.sin())
            }
            Region::Neighborhood { .. } => {
                let bbox = self.bbox();
                loop {
                    let p = bbox.sample_uniform(rng);
                    if self.contains(p) {
                        return p;
                    }
                }
            }
            Region::Difference { outer, hole } => loop {
                let p = outer.sample_uniform(rng);
                if !hole.contains(p) {
                    return p;
                }
            },
        }
    }
}

fn subtract_intervals(keep: &[(f64, f64)], remove: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(keep.len() + remove.len());
    for &(a, b) in keep {
        let mut start = a;
        for &(c, d) in remove {
            if d < start || c > b {
                continue;
            }
            if c > start {
                out.push((start, c));
            }
            start = start.max(d);
        }
        if start < b {
            out.push((start, b));
        }
    }
    out
}
