//! The Boolean model: radius laws, random streams and samplers.

pub mod law;
pub mod rng;
pub mod sampling;

pub use law::RadiusLaw;
pub use rng::RngStream;
pub use sampling::{
    sample_boolean, sample_poisson_points, sample_reaching_grains, Grain, GrainSet,
};

/// `law_moment`: exact `E[ρ^k]`, infinite when divergent.
pub fn law_moment(law: &RadiusLaw, k: u32) -> f64 {
    law.moment(k)
}

/// `law_tail`: exact `P[ρ > t]`.
pub fn law_tail(law: &RadiusLaw, t: f64) -> f64 {
    law.tail(t)
}
