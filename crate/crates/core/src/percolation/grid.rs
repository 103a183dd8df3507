//! Uniform hash grid over grain bounding boxes.
//!
//! The cell side follows the bulk of the radius distribution rather than its
//! maximum so heavy-tailed samples do not collapse into a handful of cells.
//! A grain whose box spans more than [`MAX_CELLS_PER_GRAIN`] cells is kept
//! in an overflow list and tested against everything.

use crate::geometry::{Point, Rect};
use crate::model::Grain;

pub const MAX_CELLS_PER_GRAIN: usize = 64;
const MAX_CELLS_PER_AXIS: usize = 2048;

#[derive(Clone, Debug)]
pub struct GrainIndex {
    bounds: Rect,
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    starts: Vec<u32>,
    items: Vec<u32>,
    overflow: Vec<u32>,
    is_overflow: Vec<bool>,
}

impl GrainIndex {
    /// Index with cell side at least `min_cell`.
    pub fn build(grains: &[Grain], min_cell: f64) -> Self {
        let bounds = grains.iter().map(Grain::bbox).reduce(|a, b| Rect {
            lo: Point::new(a.lo.x.min(b.lo.x), a.lo.y.min(b.lo.y)),
            hi: Point::new(a.hi.x.max(b.hi.x), a.hi.y.max(b.hi.y)),
        });
        let Some(bounds) = bounds else {
            return Self {
                bounds: Rect {
                    lo: Point::ORIGIN,
                    hi: Point::ORIGIN,
                },
                origin: Point::ORIGIN,
                cell: 1.0,
                nx: 1,
                ny: 1,
                starts: vec![0, 0],
                items: Vec::new(),
                overflow: Vec::new(),
                is_overflow: Vec::new(),
            };
        };
        let mut radii: Vec<f64> = grains.iter().map(|g| g.radius).collect();
        let k = ((radii.len() * 9) / 10).min(radii.len() - 1);
        let (_, q90, _) = radii.select_nth_unstable_by(k, f64::total_cmp);
        let extent = bounds.long_side();
        let cell = (2.0 * *q90)
            .max(min_cell)
            .max(extent / MAX_CELLS_PER_AXIS as f64)
            .max(f64::MIN_POSITIVE);
        let nx = ((bounds.width() / cell).floor() as usize + 1).min(MAX_CELLS_PER_AXIS);
        let ny = ((bounds.height() / cell).floor() as usize + 1).min(MAX_CELLS_PER_AXIS);

        let mut index = Self {
            bounds,
            origin: bounds.lo,
            cell,
            nx,
            ny,
            starts: vec![0; nx * ny + 1],
            items: Vec::new(),
            overflow: Vec::new(),
            is_overflow: vec![false; grains.len()],
        };
        for (i, g) in grains.iter().enumerate() {
            let (x0, x1, y0, y1) = index.cell_range(&g.bbox());
            if (x1 - x0 + 1) * (y1 - y0 + 1) > MAX_CELLS_PER_GRAIN {
                index.overflow.push(i as u32);
                index.is_overflow[i] = true;
                continue;
            }
            for cy in y0..=y1 {
                for cx in x0..=x1 {
                    index.starts[cy * nx + cx + 1] += 1;
                }
            }
        }
        for c in 0..nx * ny {
            index.starts[c + 1] += index.starts[c];
        }
        let mut fill = index.starts.clone();
        index.items = vec![0; index.starts[nx * ny] as usize];
        for (i, g) in grains.iter().enumerate() {
            if index.is_overflow[i] {
                continue;
            }
            let (x0, x1, y0, y1) = index.cell_range(&g.bbox());
            for cy in y0..=y1 {
                for cx in x0..=x1 {
                    let slot = &mut fill[cy * nx + cx];
                    index.items[*slot as usize] = i as u32;
                    *slot += 1;
                }
            }
        }
        index
    }

    fn cell_coord(&self, v: f64, origin: f64, n: usize) -> usize {
        let c = ((v - origin) / self.cell).floor();
        if c <= 0.0 {
            0
        } else {
            (c as usize).min(n - 1)
        }
    }

    fn cell_range(&self, r: &Rect) -> (usize, usize, usize, usize) {
        (
            self.cell_coord(r.lo.x, self.origin.x, self.nx),
            self.cell_coord(r.hi.x, self.origin.x, self.nx),
            self.cell_coord(r.lo.y, self.origin.y, self.ny),
            self.cell_coord(r.hi.y, self.origin.y, self.ny),
        )
    }

    fn cell_items(&self, cx: usize, cy: usize) -> &[u32] {
        let c = cy * self.nx + cx;
        &self.items[self.starts[c] as usize..self.starts[c + 1] as usize]
    }

    /// Calls `f(i, j)` once for each unordered pair `i < j` whose bounding
    /// boxes share a cell (a superset of the overlapping pairs).
    pub fn for_each_candidate_pair<F: FnMut(usize, usize)>(&self, grains: &[Grain], mut f: F) {
        let mut stamp = vec![u32::MAX; grains.len()];
        for (i, g) in grains.iter().enumerate() {
            if self.is_overflow[i] {
                continue;
            }
            let (x0, x1, y0, y1) = self.cell_range(&g.bbox());
            for cy in y0..=y1 {
                for cx in x0..=x1 {
                    for &j in self.cell_items(cx, cy) {
                        let j = j as usize;
                        if j > i && stamp[j] != i as u32 {
                            stamp[j] = i as u32;
                            f(i, j);
                        }
                    }
                }
            }
        }
        for (k, &o) in self.overflow.iter().enumerate() {
            let o = o as usize;
            for j in 0..grains.len() {
                if j == o || (self.is_overflow[j] && self.overflow[..=k].contains(&(j as u32))) {
                    continue;
                }
                f(o.min(j), o.max(j));
            }
        }
    }

    /// Calls `f(i)` for every grain whose box may meet `r`. Grains spanning
    /// several cells can be reported more than once.
    pub fn for_each_near_rect<F: FnMut(usize)>(&self, r: &Rect, mut f: F) {
        if !self.items.is_empty() && r.gap(&self.bounds) == 0.0 {
            let (x0, x1, y0, y1) = self.cell_range(r);
            for cy in y0..=y1 {
                for cx in x0..=x1 {
                    for &i in self.cell_items(cx, cy) {
                        f(i as usize);
                    }
                }
            }
        }
        for &o in &self.overflow {
            f(o as usize);
        }
    }

    /// Calls `f(i)` for every grain that may contain `p`.
    pub fn for_each_near_point<F: FnMut(usize)>(&self, p: Point, mut f: F) {
        if self.bounds.contains(p) && !self.items.is_empty() {
            let cx = self.cell_coord(p.x, self.origin.x, self.nx);
            let cy = self.cell_coord(p.y, self.origin.y, self.ny);
            for &i in self.cell_items(cx, cy) {
                f(i as usize);
            }
        }
        for &o in &self.overflow {
            f(o as usize);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::discs_overlap;
    use rand::{Rng, SeedableRng};

    #[test]
    fn candidate_pairs_cover_all_overlaps() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for round in 0..20 {
            let n = 200;
            let grains: Vec<Grain> = (0..n)
                .map(|_| {
                    let r = if rng.random::<f64>() < 0.05 {
                        5.0 + 20.0 * rng.random::<f64>()
                    } else {
                        0.3 * rng.random::<f64>()
                    };
                    Grain::new(Point::new(30.0 * rng.random::<f64>(), 30.0 * rng.random::<f64>()), r)
                })
                .collect();
            let index = GrainIndex::build(&grains, 0.0);
            let mut found = std::collections::BTreeSet::new();
            index.for_each_candidate_pair(&grains, |i, j| {
                assert!(i < j);
                assert!(found.insert((i, j)), "duplicate pair ({i}, {j}) in round {round}");
            });
            for i in 0..n {
                for j in i + 1..n {
                    if discs_overlap(&grains[i], &grains[j]) {
                        assert!(found.contains(&(i, j)), "missed ({i}, {j})");
                    }
                }
            }
        }
    }

    #[test]
    fn empty_index() {
        let index = GrainIndex::build(&[], 1.0);
        let mut n = 0;
        index.for_each_candidate_pair(&[], |_, _| n += 1);
        index.for_each_near_point(Point::ORIGIN, |_| n += 1);
        assert_eq!(n, 0);
    }
}
