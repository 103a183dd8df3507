//! Brute-force oracles shared by the integration tests. Deliberately
//! simple and slow; nothing here is used by the library.

#![allow(dead_code)]

use std::collections::VecDeque;

use rand::Rng;
use vacancy_core::geometry::{Point, Rect};
use vacancy_core::model::Grain;

/// Component labels by breadth-first search over all pairs.
pub fn bfs_components(grains: &[Grain]) -> Vec<usize> {
    let n = grains.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if label[j] == usize::MAX {
                    let d = grains[i].center.dist(grains[j].center);
                    if d <= grains[i].radius + grains[j].radius {
                        label[j] = next;
                        queue.push_back(j);
                    }
                }
            }
        }
        next += 1;
    }
    label
}

/// Whether two labelings induce the same partition.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

/// Occupied crossing of `rect` by flood fill on a pixel grid of pitch
/// `pitch`: pixel centres inside some disc are occupied, 4-neighbour
/// connectivity, source and sink are the first and last pixel rows (or
/// columns) along the travel axis.
pub fn flood_fill_crossing(grains: &[Grain], rect: &Rect, vertical_travel: bool, pitch: f64) -> bool {
    pixel_crossing(grains, rect, vertical_travel, pitch, true)
}

/// Vacant crossing by the same flood fill over pixel centres covered by no
/// disc. Independent of the duality used by the library.
pub fn flood_fill_vacant(grains: &[Grain], rect: &Rect, vertical_travel: bool, pitch: f64) -> bool {
    pixel_crossing(grains, rect, vertical_travel, pitch, false)
}

fn pixel_crossing(grains: &[Grain], rect: &Rect, vertical_travel: bool, pitch: f64, occupied: bool) -> bool {
    let nx = (rect.width() / pitch).ceil() as usize;
    let ny = (rect.height() / pitch).ceil() as usize;
    let px = rect.width() / nx as f64;
    let py = rect.height() / ny as f64;
    let centre = |i: usize, j: usize| {
        Point::new(rect.lo.x + (i as f64 + 0.5) * px, rect.lo.y + (j as f64 + 0.5) * py)
    };
    let mut covered = vec![false; nx * ny];
    for g in grains {
        let to_idx = |v: f64, lo: f64, p: f64, n: usize| ((v - lo) / p - 0.5).clamp(0.0, n as f64 - 1.0);
        let i0 = to_idx(g.center.x - g.radius, rect.lo.x, px, nx).floor() as usize;
        let i1 = to_idx(g.center.x + g.radius, rect.lo.x, px, nx).ceil() as usize;
        let j0 = to_idx(g.center.y - g.radius, rect.lo.y, py, ny).floor() as usize;
        let j1 = to_idx(g.center.y + g.radius, rect.lo.y, py, ny).ceil() as usize;
        for j in j0..=j1 {
            for i in i0..=i1 {
                if g.center.dist(centre(i, j)) <= g.radius {
                    covered[j * nx + i] = true;
                }
            }
        }
    }
    let open: Vec<bool> = covered.iter().map(|&c| c == occupied).collect();
    let mut seen = vec![false; nx * ny];
    let mut queue = VecDeque::new();
    for k in 0..nx * ny {
        let (i, j) = (k % nx, k / nx);
        let on_source = if vertical_travel { j == 0 } else { i == 0 };
        if on_source && open[k] {
            seen[k] = true;
            queue.push_back(k);
        }
    }
    while let Some(k) = queue.pop_front() {
        let (i, j) = (k % nx, k / nx);
        if (vertical_travel && j == ny - 1) || (!vertical_travel && i == nx - 1) {
            return true;
        }
        let mut visit = |ii: usize, jj: usize| {
            let kk = jj * nx + ii;
            if open[kk] && !seen[kk] {
                seen[kk] = true;
                queue.push_back(kk);
            }
        };
        if i > 0 {
            visit(i - 1, j);
        }
        if i + 1 < nx {
            visit(i + 1, j);
        }
        if j > 0 {
            visit(i, j - 1);
        }
        if j + 1 < ny {
            visit(i, j + 1);
        }
    }
    false
}

/// Whether some grain boundary passes within `band` of another grain's
/// boundary or of a rectangle edge: configurations a pixel oracle cannot
/// resolve.
pub fn near_degenerate(grains: &[Grain], rect: &Rect, band: f64) -> bool {
    let pair = grains.iter().enumerate().any(|(i, a)| {
        grains[i + 1..].iter().any(|b| {
            let d = a.center.dist(b.center);
            (d - (a.radius + b.radius)).abs() < band || (d - (a.radius - b.radius).abs()).abs() < band
        })
    });
    let edge = grains.iter().any(|g| {
        [g.center.x - rect.lo.x, rect.hi.x - g.center.x, g.center.y - rect.lo.y, rect.hi.y - g.center.y]
            .iter()
            .any(|&d| (d.abs() - g.radius).abs() < band)
    });
    pair || edge
}

/// `n` grains with centres uniform in `area` and radii uniform in `[r0, r1]`.
pub fn random_grains<R: Rng>(rng: &mut R, n: usize, area: &Rect, r0: f64, r1: f64) -> Vec<Grain> {
    (0..n)
        .map(|_| {
            let c = Point::new(
                rng.random_range(area.lo.x..=area.hi.x),
                rng.random_range(area.lo.y..=area.hi.y),
            );
            Grain::new(c, rng.random_range(r0..=r1))
        })
        .collect()
}
