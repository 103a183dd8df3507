//! Planar geometry: rectangles, neighbourhood regions, the knitting layout
//! and exact intersection predicates.

pub mod layout;
pub mod predicates;
pub mod shapes;

pub use layout::{
    build_lemma1_layout, layout_violations, make_strip, strip, verify_knitting, Junction, KnittingReport,
    Lemma1Layout, LayoutRect, DEFAULT_REACH_FACTOR,
};
pub use predicates::{
    disc_contains_point, disc_meets_rect, disc_meets_segment, discs_overlap, lens_meets_rect,
    lens_meets_segment, BOUNDARY_TOL,
};
pub use shapes::{Orientation, Point, Rect, Region, Segment};
