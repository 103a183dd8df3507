//! Connected components of a grain union, optionally clipped to a window,
//! with virtual nodes for boundary segments.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::grid::GrainIndex;
use super::union_find::DisjointSet;
use crate::geometry::{
    disc_meets_rect, disc_meets_segment, discs_overlap, lens_meets_rect, Point, Rect, Segment,
};
use crate::model::Grain;

/// Partition of grain indices into connected classes.
///
/// Unclipped, two grains are adjacent when their discs overlap. Clipped to a
/// rectangle, only grains of positive radius meeting the rectangle take part
/// and two of them are adjacent when their lens meets the rectangle; since
/// each `grain ∩ rect` is convex this is exactly connectivity of
/// `(∪ grains) ∩ rect`. Non-participating grains are singletons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentStructure {
    /// Class label of each grain, dense in `0..class_count`.
    pub labels: Vec<usize>,
    pub class_count: usize,
    pub class_bboxes: Vec<Rect>,
    /// For each virtual boundary segment, the class touching it (the first
    /// one found if several do not connect; see `boundary_classes`).
    pub boundary_classes: Vec<Vec<usize>>,
    pub participates: Vec<bool>,
    /// Adjacency edges, recorded when requested for witness extraction.
    pub edges: Option<Vec<(usize, usize)>>,
}

impl ComponentStructure {
    pub fn class_of(&self, grain: usize) -> usize {
        self.labels[grain]
    }

    /// Whether some class touches every listed boundary.
    pub fn boundaries_connected(&self, a: usize, b: usize) -> bool {
        self.boundary_classes[a]
            .iter()
            .any(|c| self.boundary_classes[b].contains(c))
    }

    /// Members of each class.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }
}

/// Options for [`build_components_with`].
#[derive(Clone, Debug, Default)]
pub struct ComponentOptions {
    pub clip: Option<Rect>,
    pub boundaries: Vec<Segment>,
    pub record_edges: bool,
}

pub fn build_components(grains: &[Grain], clip: Option<Rect>) -> ComponentStructure {
    build_components_with(
        grains,
        &ComponentOptions {
            clip,
            ..ComponentOptions::default()
        },
    )
}

pub fn build_components_with(grains: &[Grain], opts: &ComponentOptions) -> ComponentStructure {
    let participates: Vec<bool> = grains
        .iter()
        .map(|g| match &opts.clip {
            Some(rect) => g.radius > 0.0 && disc_meets_rect(g, rect),
            None => true,
        })
        .collect();
    let active: Vec<usize> = (0..grains.len()).filter(|&i| participates[i]).collect();
    let active_grains: Vec<Grain> = active.iter().map(|&i| grains[i]).collect();

    let mut ds = DisjointSet::new(grains.len());
    let mut edges = opts.record_edges.then(Vec::new);
    let min_cell = opts.clip.map_or(0.0, |r| r.short_side() / 64.0);
    let index = GrainIndex::build(&active_grains, min_cell);
    index.for_each_candidate_pair(&active_grains, |a, b| {
        let (ga, gb) = (&active_grains[a], &active_grains[b]);
        let adjacent = match &opts.clip {
            Some(rect) => lens_meets_rect(ga, gb, rect),
            None => discs_overlap(ga, gb),
        };
        if adjacent {
            ds.union(active[a], active[b]);
            if let Some(e) = edges.as_mut() {
                e.push((active[a], active[b]));
            }
        }
    });

    let (labels, class_count) = ds.labels();
    let mut class_bboxes: Vec<Option<Rect>> = vec![None; class_count];
    for (i, g) in grains.iter().enumerate() {
        let b = g.bbox();
        let slot = &mut class_bboxes[labels[i]];
        *slot = Some(match slot {
            Some(r) => Rect {
                lo: Point::new(r.lo.x.min(b.lo.x), r.lo.y.min(b.lo.y)),
                hi: Point::new(r.hi.x.max(b.hi.x), r.hi.y.max(b.hi.y)),
            },
            None => b,
        });
    }
    let boundary_classes = opts
        .boundaries
        .iter()
        .map(|seg| {
            let mut touching: Vec<usize> = active
                .iter()
                .filter(|&&i| disc_meets_segment(&grains[i], seg))
                .map(|&i| labels[i])
                .collect();
            touching.sort_unstable();
            touching.dedup();
            touching
        })
        .collect();
    ComponentStructure {
        labels,
        class_count,
        class_bboxes: class_bboxes.into_iter().map(|b| b.expect("every class has a grain")).collect(),
        boundary_classes,
        participates,
        edges,
    }
}

/// Shortest chain of grains from boundary `a` to boundary `b`, if any.
pub fn witness_chain(grains: &[Grain], cs: &ComponentStructure, a: &Segment, b: &Segment) -> Option<Vec<usize>> {
    let edges = cs.edges.as_ref()?;
    let n = grains.len();
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for i in 0..n {
        if cs.participates[i] && disc_meets_segment(&grains[i], a) {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        if disc_meets_segment(&grains[i], b) {
            let mut chain = vec![i];
            let mut k = i;
            while prev[k] != usize::MAX {
                k = prev[k];
                chain.push(k);
            }
            chain.reverse();
            return Some(chain);
        }
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                prev[j] = i;
                queue.push_back(j);
            }
        }
    }
    None
}
