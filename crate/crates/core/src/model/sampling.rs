//! Poisson point and Boolean-model samplers over planar regions.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::law::RadiusLaw;
use super::rng::RngStream;
use crate::error::{invalid, require_positive, Error, Result};
use crate::geometry::{Point, Rect, Region};

/// A closed disc `B(center, radius)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grain {
    pub center: Point,
    pub radius: f64,
}

impl Grain {
    pub const fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn bbox(&self) -> Rect {
        Rect {
            lo: Point::new(self.center.x - self.radius, self.center.y - self.radius),
            hi: Point::new(self.center.x + self.radius, self.center.y + self.radius),
        }
    }
}

/// A finite realisation of the restricted occupied set `ξ^A_λ`: the grains
/// whose centres fall in `source_region`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrainSet {
    pub grains: Vec<Grain>,
    pub source_region: Region,
    pub intensity: f64,
    pub seed: RngStream,
}

impl GrainSet {
    pub fn new(grains: Vec<Grain>, source_region: Region, intensity: f64, seed: RngStream) -> Self {
        Self {
            grains,
            source_region,
            intensity,
            seed,
        }
    }

    /// A grain set with no provenance, for hand-built configurations.
    pub fn from_grains(grains: Vec<Grain>) -> Self {
        let bbox = grains
            .iter()
            .map(Grain::bbox)
            .reduce(|a, b| Rect {
                lo: Point::new(a.lo.x.min(b.lo.x), a.lo.y.min(b.lo.y)),
                hi: Point::new(a.hi.x.max(b.hi.x), a.hi.y.max(b.hi.y)),
            })
            .unwrap_or(Rect {
                lo: Point::ORIGIN,
                hi: Point::ORIGIN,
            });
        Self::new(grains, Region::Rect(bbox), 1.0, RngStream::new(0))
    }

    pub fn len(&self) -> usize {
        self.grains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grains.is_empty()
    }

    pub fn max_radius(&self) -> f64 {
        self.grains.iter().map(|g| g.radius).fold(0.0, f64::max)
    }

    /// Union with an independent sample (superposition of Poisson
    /// processes adds intensities).
    pub fn superpose(mut self, other: GrainSet) -> GrainSet {
        self.grains.extend(other.grains);
        self.intensity += other.intensity;
        self
    }
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if mean == 0.0 {
        return Ok(0);
    }
    if !mean.is_finite() || mean < 0.0 {
        return Err(Error::UnboundedRegion);
    }
    let d = Poisson::new(mean).map_err(|e| invalid("poisson mean", e.to_string()))?;
    Ok(d.sample(rng) as u64)
}

/// Homogeneous Poisson process of intensity `λ` on `region`.
pub fn sample_poisson_points(region: &Region, lambda: f64, stream: &RngStream) -> Result<Vec<Point>> {
    require_positive("lambda", lambda)?;
    let area = region.area();
    if !area.is_finite() {
        return Err(Error::UnboundedRegion);
    }
    let mut rng = stream.rng();
    let n = poisson_count(lambda * area, &mut rng)?;
    Ok((0..n).map(|_| region.sample_uniform(&mut rng)).collect())
}

/// `ξ^region_λ`: Poisson centres with i.i.d. radii drawn from `law`.
pub fn sample_boolean(
    region: &Region,
    lambda: f64,
    law: &RadiusLaw,
    stream: &RngStream,
) -> Result<GrainSet> {
    law.validate()?;
    let centers = sample_poisson_points(region, lambda, stream)?;
    let mut rng = stream.substream("radii", 0).rng();
    let grains = centers
        .into_iter()
        .map(|c| Grain::new(c, law.sample(&mut rng)))
        .collect();
    Ok(GrainSet::new(grains, region.clone(), lambda, *stream))
}

/// The grains of `ξ^region_λ` that intersect `target`, sampled directly as
/// the thinned Poisson process of centres `y` with `ρ >= dist(y, target)`.
///
/// Radii are split into geometric shells `[lo, hi)`; a grain with radius in
/// a shell can only reach `target` if its centre lies within `hi` of it, so
/// each shell is sampled over `target ⊕ hi` clipped to the region's bounding
/// box and filtered exactly. The output has the law of filtering a full
/// `sample_boolean(region, ..)` draw to grains meeting `target`.
pub fn sample_reaching_grains(
    region: &Region,
    target: &Rect,
    lambda: f64,
    law: &RadiusLaw,
    stream: &RngStream,
) -> Result<GrainSet> {
    require_positive("lambda", lambda)?;
    law.validate()?;
    if !region.area().is_finite() {
        return Err(Error::UnboundedRegion);
    }
    let mut rng = stream.rng();
    let mut grains = Vec::new();
    let bbox = region.bbox();
    let dmin = region.min_dist_to(target);
    let step = {
        let s = target.short_side().max(target.long_side() / 10.0) / 64.0;
        if s > 0.0 {
            s
        } else {
            bbox.long_side().max(1.0) * 1e-6
        }
    };
    let mut lo = dmin;
    let mut width = step;
    while law.tail_ge(lo) > 0.0 {
        let covers = target.expanded(lo + width).contains_rect(&bbox);
        let hi = if covers { f64::INFINITY } else { lo + width };
        let mass = law.mass(lo, hi);
        let window = if covers {
            Some(bbox)
        } else {
            target.expanded(hi).intersection(&bbox)
        };
        if let (true, Some(window)) = (mass > 0.0, window) {
            let n = poisson_count(lambda * mass * window.area(), &mut rng)?;
            for _ in 0..n {
                let p = window.sample_uniform(&mut rng);
                let rho = law.sample_in(lo, hi, &mut rng);
                if region.contains(p) && target.dist(p) <= rho {
                    grains.push(Grain::new(p, rho));
                }
            }
        }
        if covers {
            break;
        }
        lo = hi;
        width *= 2.0;
    }
    Ok(GrainSet::new(grains, region.clone(), lambda, *stream))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::strip;

    #[test]
    fn degenerate_region_gives_no_points() {
        let r = Region::Rect(Rect::from_bounds(0.0, 1.0, 0.5, 0.5).unwrap());
        assert!(sample_poisson_points(&r, 5.0, &RngStream::new(1)).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_intensity() {
        let r = Region::Rect(Rect::from_bounds(0.0, 1.0, 0.0, 1.0).unwrap());
        assert!(sample_poisson_points(&r, 0.0, &RngStream::new(1)).is_err());
        assert!(sample_poisson_points(&r, f64::NAN, &RngStream::new(1)).is_err());
    }

    #[test]
    fn fixed_law_radii() {
        let r = Region::Rect(Rect::from_bounds(0.0, 10.0, 0.0, 1.0).unwrap());
        let s = sample_boolean(&r, 1.0, &RadiusLaw::fixed(1.0), &RngStream::new(2)).unwrap();
        assert!(s.grains.iter().all(|g| g.radius == 1.0 && r.contains(g.center)));
    }

    #[test]
    fn unreachable_target_is_empty() {
        let target = strip(4.0).unwrap();
        let annulus = Region::difference(
            Region::disc(Point::ORIGIN, 40.0).unwrap(),
            Region::neighborhood(target, 4.0).unwrap(),
        )
        .unwrap();
        for seed in 0..50 {
            let s = sample_reaching_grains(&annulus, &target, 3.0, &RadiusLaw::fixed(1.0), &RngStream::new(seed))
                .unwrap();
            assert!(s.is_empty());
        }
    }

    #[test]
    fn reaching_grains_actually_reach() {
        let target = strip(2.0).unwrap();
        let region = Region::neighborhood(target, 30.0).unwrap();
        let law = RadiusLaw::pareto(2.5, 0.5);
        let s = sample_reaching_grains(&region, &target, 0.5, &law, &RngStream::new(9)).unwrap();
        assert!(!s.is_empty());
        for g in &s.grains {
            assert!(region.contains(g.center));
            assert!(target.dist(g.center) <= g.radius);
        }
    }

    #[test]
    fn reproducible() {
        let r = Region::disc(Point::ORIGIN, 5.0).unwrap();
        let law = RadiusLaw::exponential(0.5);
        let a = sample_boolean(&r, 2.0, &law, &RngStream::with_stream(4, 8)).unwrap();
        let b = sample_boolean(&r, 2.0, &law, &RngStream::with_stream(4, 8)).unwrap();
        assert_eq!(a, b);
    }
}
