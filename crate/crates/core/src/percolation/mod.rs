//! Crossings, connected components, diameters and vacant area in the plane.

pub mod components;
pub mod crossing;
pub mod diameter;
pub mod grid;
pub mod union_find;
pub mod vacant;

pub use components::{
    build_components, build_components_with, witness_chain, ComponentOptions, ComponentStructure,
};
pub use crossing::{
    crossing, occupied_crossing, occupied_crossing_witness, vacant_crossing, Crossing,
    CrossingQuery, Phase, Span,
};
pub use diameter::{component_diameter, seed_component, union_diameter};
pub use grid::GrainIndex;
pub use union_find::DisjointSet;
pub use vacant::vacant_fraction;
