//! Boolean model of random discs in the plane: sampling, crossings,
//! multiscale vacancy certificates and Monte Carlo estimators.

pub mod error;
pub mod estimators;
pub mod geometry;
pub mod model;
pub mod multiscale;
pub mod percolation;
pub mod quadrature;
pub mod replicates;
pub mod slice;
pub mod stats;

pub use error::{Error, Result};
