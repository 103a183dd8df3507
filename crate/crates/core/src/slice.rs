//! The planar Boolean model induced on the plane `x_3 = 0` by a Boolean
//! model of balls in three dimensions.
//!
//! A ball of radius `ρ` centred at height `h` meets the plane iff `|h| <= ρ`
//! and then cuts a disc of radius `σ = √(ρ² - h²)`. Hitting balls form a
//! planar Poisson process of intensity `λ' = λ ω_{d-2} E[ρ^{d-2}]` whose
//! radii are size-biased with `h` uniform on `[-ρ, ρ]`.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Error, Result};
use crate::geometry::{disc_contains_point, Rect, Region};
use crate::model::{sample_poisson_points, Grain, GrainSet, RadiusLaw, RngStream};
use crate::replicates;
use crate::stats::{BernoulliEstimate, MeanEstimate, Z95};

/// Volume of the unit ball in `R^k`.
pub fn unit_ball_volume(k: u32) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(k - 2) * 2.0 * PI / f64::from(k),
    }
}

/// `λ' = λ ω_{d-2} E[ρ^{d-2}]`; infinite when the moment diverges.
pub fn induced_intensity(lambda: f64, d: u32, law: &RadiusLaw) -> Result<f64> {
    if d < 3 {
        return Err(invalid("d", format!("ambient dimension must be >= 3, got {d}")));
    }
    require_positive("lambda", lambda)?;
    law.validate()?;
    Ok(lambda * unit_ball_volume(d - 2) * law.moment(d - 2))
}

fn require_three(d: u32) -> Result<()> {
    if d == 3 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("slice sampling is implemented for d = 3, got {d}")))
    }
}

/// Planar discs cut by the three-dimensional model, centres in `window`.
pub fn sample_slice(lambda: f64, d: u32, law: &RadiusLaw, window: &Rect, stream: &RngStream) -> Result<GrainSet> {
    require_three(d)?;
    let intensity = induced_intensity(lambda, d, law)?;
    if !intensity.is_finite() {
        return Err(invalid("law", "E[ρ] is infinite, the slice is covered"));
    }
    let region = Region::Rect(*window);
    let centers = sample_poisson_points(&region, intensity, stream)?;
    let mut rng = stream.substream("slice-radii", 0).rng();
    let grains = centers
        .into_iter()
        .map(|c| {
            let rho = law.sample_size_biased(&mut rng)?;
            let h = rho * (2.0 * rng.random::<f64>() - 1.0);
            Ok(Grain::new(c, (rho * rho - h * h).sqrt()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrainSet::new(grains, region, intensity, *stream))
}

/// Reference sampler: every ball of the 3D model centred in
/// `window × [-H, H]` with `H` the largest radius, intersected with the
/// plane. Bounded laws only.
pub fn sample_slice_brute_force(lambda: f64, law: &RadiusLaw, window: &Rect, stream: &RngStream) -> Result<Vec<Grain>> {
    let h_max = law
        .support_max()
        .ok_or_else(|| invalid("law", "brute-force slicing needs a bounded radius law"))?;
    require_positive("lambda", lambda)?;
    let mut rng = stream.rng();
    let volume = window.area() * 2.0 * h_max;
    let n = rand_distr::Distribution::sample(
        &rand_distr::Poisson::new(lambda * volume).map_err(|e| invalid("lambda", e.to_string()))?,
        &mut rng,
    ) as u64;
    let mut grains = Vec::new();
    for _ in 0..n {
        let c = window.sample_uniform(&mut rng);
        let h = h_max * (2.0 * rng.random::<f64>() - 1.0);
        let rho = law.sample(&mut rng);
        if h.abs() < rho {
            grains.push(Grain::new(c, (rho * rho - h * h).sqrt()));
        }
    }
    Ok(grains)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceStats {
    pub grains: u64,
    /// Disc centres per unit area, with its standard error.
    pub intensity: MeanEstimate,
    pub sigma: MeanEstimate,
    pub sigma_sq: MeanEstimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub direct: f64,
    pub reference: f64,
    pub z: f64,
    pub agrees: bool,
}

impl Comparison {
    fn of(a: &MeanEstimate, b: &MeanEstimate) -> Self {
        let se = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
        let z = if se > 0.0 { (a.mean - b.mean) / se } else { 0.0 };
        Self {
            direct: a.mean,
            reference: b.mean,
            z,
            agrees: z.abs() <= AGREEMENT_Z,
        }
    }
}

/// Two-sample agreement threshold on the z-score (about 99.7% two-sided),
/// so that a report with several comparisons is not dominated by chance.
pub const AGREEMENT_Z: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceReport {
    pub lambda: f64,
    pub d: u32,
    pub law: RadiusLaw,
    pub window: Rect,
    pub n_reps: u64,
    pub expected_intensity: f64,
    pub intensity_ratio: f64,
    pub direct: SliceStats,
    /// Fraction of replicates whose slice covers the window centre.
    pub centre_coverage: BernoulliEstimate,
    /// `1 - exp(-λ ω_d E[ρ^d])`.
    pub expected_coverage: f64,
    pub reference: Option<SliceStats>,
    pub comparisons: Vec<(String, Comparison)>,
    pub consistent: bool,
}

fn stats(window: &Rect, per_rep: &[Vec<Grain>]) -> SliceStats {
    let counts: Vec<f64> = per_rep.iter().map(|g| g.len() as f64 / window.area()).collect();
    let sigma: Vec<f64> = per_rep.iter().flatten().map(|g| g.radius).collect();
    let sigma_sq: Vec<f64> = sigma.iter().map(|s| s * s).collect();
    SliceStats {
        grains: sigma.len() as u64,
        intensity: MeanEstimate::from_samples(&counts),
        sigma: MeanEstimate::from_samples(&sigma),
        sigma_sq: MeanEstimate::from_samples(&sigma_sq),
    }
}

/// Checks the direct slice sampler against the induced intensity, the 3D
/// void probability at the window centre and, for bounded laws, a
/// brute-force slice of the three-dimensional model.
pub fn slice_consistency(
    lambda: f64,
    d: u32,
    law: &RadiusLaw,
    window: &Rect,
    n_reps: u64,
    stream: &RngStream,
) -> Result<SliceReport> {
    require_three(d)?;
    let expected_intensity = induced_intensity(lambda, d, law)?;
    let direct: Vec<Vec<Grain>> = replicates::collect(n_reps, &stream.substream("direct", 0), |r| {
        Ok(sample_slice(lambda, d, law, window, r)?.grains)
    })?;
    let direct_stats = stats(window, &direct);
    let centre = window.center();
    let covered = direct
        .iter()
        .filter(|gs| gs.iter().any(|g| disc_contains_point(g, centre)))
        .count() as u64;
    let centre_coverage = BernoulliEstimate::new(covered, n_reps, *stream);
    let expected_coverage = -(-lambda * unit_ball_volume(d) * law.moment(d)).exp_m1();

    let mut comparisons = Vec::new();
    let ratio_target = MeanEstimate {
        mean: expected_intensity,
        std_error: 0.0,
        n: 0,
        ci_lo: expected_intensity,
        ci_hi: expected_intensity,
    };
    comparisons.push(("intensity_vs_formula".to_owned(), Comparison::of(&direct_stats.intensity, &ratio_target)));
    let reference = if law.support_max().is_some() {
        let brute: Vec<Vec<Grain>> = replicates::collect(n_reps, &stream.substream("brute", 0), |r| {
            sample_slice_brute_force(lambda, law, window, r)
        })?;
        let s = stats(window, &brute);
        comparisons.push(("intensity".to_owned(), Comparison::of(&direct_stats.intensity, &s.intensity)));
        comparisons.push(("sigma".to_owned(), Comparison::of(&direct_stats.sigma, &s.sigma)));
        comparisons.push(("sigma_sq".to_owned(), Comparison::of(&direct_stats.sigma_sq, &s.sigma_sq)));
        Some(s)
    } else {
        None
    };
    let coverage_ok = (centre_coverage.point - expected_coverage).abs()
        <= AGREEMENT_Z / Z95 * (centre_coverage.ci_hi - centre_coverage.ci_lo) / 2.0 + 1e-12;
    let consistent = coverage_ok && comparisons.iter().all(|(_, c)| c.agrees);
    Ok(SliceReport {
        lambda,
        d,
        law: law.clone(),
        window: *window,
        n_reps,
        expected_intensity,
        intensity_ratio: direct_stats.intensity.mean / lambda,
        direct: direct_stats,
        centre_coverage,
        expected_coverage,
        reference,
        comparisons,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn induced_intensity_examples() {
        assert!((induced_intensity(0.5, 3, &RadiusLaw::fixed(1.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((induced_intensity(1.0, 4, &RadiusLaw::fixed(1.0)).unwrap() - PI).abs() < 1e-15);
        assert!(induced_intensity(1.0, 3, &RadiusLaw::pareto(1.0, 1.0)).unwrap().is_infinite());
        assert!(induced_intensity(1.0, 2, &RadiusLaw::fixed(1.0)).is_err());
    }

    #[test]
    fn slice_radii_are_positive_and_bounded() {
        let w = Rect::from_bounds(0.0, 20.0, 0.0, 20.0).unwrap();
        let law = RadiusLaw::uniform(0.5, 2.0);
        let g = sample_slice(0.3, 3, &law, &w, &RngStream::new(2)).unwrap();
        assert!(!g.is_empty());
        assert!(g.grains.iter().all(|g| g.radius > 0.0 && g.radius <= 2.0));
    }
}
