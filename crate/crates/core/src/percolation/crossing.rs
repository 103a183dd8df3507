//! Occupied and vacant crossings of rectangles.
//!
//! A rectangle is crossed in the occupied phase when a chain of grains,
//! each meeting the rectangle and consecutive ones meeting inside it, joins
//! the two target edges. Vacant crossings are decided by planar duality.

use serde::{Deserialize, Serialize};

use super::components::{build_components_with, witness_chain, ComponentOptions};
use crate::error::{invalid, Result};
use crate::geometry::{Orientation, Rect, Segment};
use crate::model::Grain;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Span {
    ShortWay,
    LongWay,
}

impl Span {
    pub fn flipped(self) -> Self {
        match self {
            Span::ShortWay => Span::LongWay,
            Span::LongWay => Span::ShortWay,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Occupied,
    Vacant,
}

#[derive(Clone, Copy, Debug)]
pub struct CrossingQuery<'a> {
    pub rect: Rect,
    pub direction: Span,
    pub phase: Phase,
    pub allowed_grains: &'a [Grain],
}

impl<'a> CrossingQuery<'a> {
    pub fn occupied(rect: Rect, direction: Span, grains: &'a [Grain]) -> Self {
        Self {
            rect,
            direction,
            phase: Phase::Occupied,
            allowed_grains: grains,
        }
    }

    pub fn vacant(rect: Rect, direction: Span, grains: &'a [Grain]) -> Self {
        Self {
            rect,
            direction,
            phase: Phase::Vacant,
            allowed_grains: grains,
        }
    }

    /// Axis along which a crossing path travels.
    pub fn travel(&self) -> Orientation {
        let long = self.rect.orientation();
        match self.direction {
            Span::LongWay => long,
            Span::ShortWay => long.flipped(),
        }
    }

    /// The two edges a crossing must join.
    pub fn target_edges(&self) -> (Segment, Segment) {
        match self.travel() {
            Orientation::Horizontal => (self.rect.left_edge(), self.rect.right_edge()),
            Orientation::Vertical => (self.rect.bottom_edge(), self.rect.top_edge()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub crossed: bool,
    /// Grain indices of a shortest crossing chain, when requested.
    pub witness: Option<Vec<usize>>,
}

fn check_rect(rect: &Rect) -> Result<()> {
    if rect.width() > 0.0 && rect.height() > 0.0 && rect.area().is_finite() {
        Ok(())
    } else {
        Err(invalid("rect", format!("crossing needs a non-empty rectangle, got {rect:?}")))
    }
}

fn require_phase(query: &CrossingQuery<'_>, phase: Phase) -> Result<()> {
    if query.phase == phase {
        Ok(())
    } else {
        Err(invalid("phase", format!("expected {phase:?}, got {:?}", query.phase)))
    }
}

fn occupied_inner(query: &CrossingQuery<'_>, want_witness: bool) -> Crossing {
    let (a, b) = query.target_edges();
    let cs = build_components_with(
        query.allowed_grains,
        &ComponentOptions {
            clip: Some(query.rect),
            boundaries: vec![a, b],
            record_edges: want_witness,
        },
    );
    let crossed = cs.boundaries_connected(0, 1);
    let witness = if crossed && want_witness {
        witness_chain(query.allowed_grains, &cs, &a, &b)
    } else {
        None
    };
    Crossing { crossed, witness }
}

pub fn occupied_crossing(query: &CrossingQuery<'_>) -> Result<bool> {
    require_phase(query, Phase::Occupied)?;
    check_rect(&query.rect)?;
    Ok(occupied_inner(query, false).crossed)
}

/// Occupied crossing together with a shortest witness chain.
pub fn occupied_crossing_witness(query: &CrossingQuery<'_>) -> Result<Crossing> {
    require_phase(query, Phase::Occupied)?;
    check_rect(&query.rect)?;
    Ok(occupied_inner(query, true))
}

/// Vacant crossing: the complement of the occupied crossing the other way.
/// Exact only when `allowed_grains` holds every grain meeting the rectangle.
pub fn vacant_crossing(query: &CrossingQuery<'_>) -> Result<bool> {
    require_phase(query, Phase::Vacant)?;
    check_rect(&query.rect)?;
    let dual = CrossingQuery {
        direction: query.direction.flipped(),
        phase: Phase::Occupied,
        ..*query
    };
    Ok(!occupied_inner(&dual, false).crossed)
}

/// Dispatches on the query's phase.
pub fn crossing(query: &CrossingQuery<'_>) -> Result<bool> {
    match query.phase {
        Phase::Occupied => occupied_crossing(query),
        Phase::Vacant => vacant_crossing(query),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn g(x: f64, y: f64, r: f64) -> Grain {
        Grain::new(Point::new(x, y), r)
    }

    fn square() -> Rect {
        Rect::from_bounds(-1.0, 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn empty_set() {
        let q = CrossingQuery::occupied(square(), Span::ShortWay, &[]);
        assert!(!occupied_crossing(&q).unwrap());
        let v = CrossingQuery::vacant(square(), Span::LongWay, &[]);
        assert!(vacant_crossing(&v).unwrap());
    }

    #[test]
    fn three_grain_chain() {
        let mut grains = vec![g(0.0, -0.5, 0.6), g(0.0, 0.3, 0.6), g(0.0, 1.1, 0.6)];
        let q = CrossingQuery::occupied(square(), Span::ShortWay, &grains);
        let c = occupied_crossing_witness(&q).unwrap();
        assert!(c.crossed);
        // The middle grain already touches the bottom edge.
        assert_eq!(c.witness.unwrap(), vec![1, 2]);
        grains.remove(1);
        let q = CrossingQuery::occupied(square(), Span::ShortWay, &grains);
        assert!(!occupied_crossing(&q).unwrap());
    }

    #[test]
    fn one_grain_bridge_blocks_vacant_long_way() {
        let rect = Rect::from_bounds(0.0, 3.0, 0.0, 1.0).unwrap();
        let grains = [g(1.5, 0.5, 1.0)];
        assert!(occupied_crossing(&CrossingQuery::occupied(rect, Span::ShortWay, &grains)).unwrap());
        assert!(!vacant_crossing(&CrossingQuery::vacant(rect, Span::LongWay, &grains)).unwrap());
    }

    #[test]
    fn degenerate_rect_and_wrong_phase_rejected() {
        let flat = Rect::unit_interval(0);
        assert!(occupied_crossing(&CrossingQuery::occupied(flat, Span::ShortWay, &[])).is_err());
        assert!(occupied_crossing(&CrossingQuery::vacant(square(), Span::ShortWay, &[])).is_err());
    }

    #[test]
    fn overlap_outside_rect_does_not_connect() {
        // The lens of these two discs lies above the rectangle.
        let rect = Rect::from_bounds(0.0, 2.0, 0.0, 1.0).unwrap();
        let grains = [g(0.0, 1.4, 1.0), g(2.0, 1.4, 1.0)];
        let q = CrossingQuery::occupied(rect, Span::LongWay, &grains);
        assert!(!occupied_crossing(&q).unwrap());
    }
}
