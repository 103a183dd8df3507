use proptest::prelude::*;

use vacancy_core::estimators::{
    bisect, cluster_diameter, coverage_profile, crossing_probability, estimate_e_event, estimate_lambda_d,
    grain_scaling, probe_reach, BisectionSettings,
};
use vacancy_core::geometry::{Point, Rect};
use vacancy_core::model::{Grain, GrainSet, RadiusLaw, RngStream};
use vacancy_core::percolation::Phase;
use vacancy_core::stats::BernoulliEstimate;

fn logistic(root: f64, x: f64) -> f64 {
    1.0 / (1.0 + (-(x - root) * 40.0).exp())
}

fn settings(increasing: bool) -> BisectionSettings {
    BisectionSettings {
        lo: 0.0,
        hi: 1.0,
        target: 0.5,
        tol: 1.0 / 64.0,
        reps_per_probe: 4000,
        budget: 1_000_000,
        increasing,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bisection_brackets_a_known_root(root in 0.1..0.9f64, increasing in any::<bool>()) {
        // Exact frequencies: the estimate is the rounded true probability.
        let b = bisect(&settings(increasing), |x, reps, _| {
            let p = logistic(root, x);
            let p = if increasing { p } else { 1.0 - p };
            Ok(BernoulliEstimate::new((p * reps as f64).round() as u64, reps, RngStream::new(0)))
        })
        .unwrap();
        prop_assert!(b.lo <= root && root <= b.hi, "{} not in [{}, {}]", root, b.lo, b.hi);
        prop_assert!(b.converged && b.width() <= 1.0 / 64.0);
        prop_assert!(b.reps_used <= 1_000_000);
    }

    #[test]
    fn scaling_keeps_centres(rs in prop::collection::vec(0.0..3.0f64, 0..30), s in 0.01..10.0f64) {
        let set = GrainSet::from_grains(rs.iter().enumerate().map(|(i, &r)| Grain::new(Point::new(i as f64, 0.0), r)).collect());
        let scaled = grain_scaling(&set, s).unwrap();
        prop_assert_eq!(scaled.len(), set.len());
        for (a, b) in set.grains.iter().zip(&scaled.grains) {
            prop_assert_eq!(a.center, b.center);
            prop_assert_eq!(b.radius, a.radius * s);
        }
    }
}

#[test]
fn bisection_rejects_bad_settings_and_respects_budget() {
    let bad = BisectionSettings { lo: 1.0, hi: 0.0, ..settings(true) };
    assert!(bisect(&bad, |_, r, _| Ok(BernoulliEstimate::new(0, r, RngStream::new(0)))).is_err());
    // A flat response at the target never resolves.
    let tight = BisectionSettings { budget: 20_000, ..settings(true) };
    let b = bisect(&tight, |_, r, _| Ok(BernoulliEstimate::new(r / 2, r, RngStream::new(0)))).unwrap();
    assert!(b.budget_exhausted && !b.converged);
    assert!(b.reps_used <= 20_000);
}

#[test]
fn scaling_rejects_nonpositive_factor() {
    let set = GrainSet::from_grains(vec![Grain::new(Point::ORIGIN, 1.0)]);
    assert!(grain_scaling(&set, 0.0).is_err());
    assert!(grain_scaling(&set, -1.0).is_err());
}

#[test]
fn probe_reach_needs_a_finite_area_moment() {
    assert_eq!(probe_reach(8.0, 0.1, &RadiusLaw::fixed(1.5), 1e-4).unwrap(), 1.5);
    let r = probe_reach(8.0, 0.1, &RadiusLaw::pareto(4.0, 1.0), 1e-4).unwrap();
    assert!(r > 1.0 && r.is_finite());
    assert!(probe_reach(8.0, 0.1, &RadiusLaw::pareto(1.8, 1.0), 1e-4).is_err());
}

#[test]
fn crossing_probability_is_monotone_in_intensity() {
    let law = RadiusLaw::fixed(1.0);
    let p = |lambda, phase| crossing_probability(8.0, lambda, &law, phase, 1500, &RngStream::new(5)).unwrap();
    let (lo, hi) = (p(0.15, Phase::Occupied), p(0.6, Phase::Occupied));
    assert!(lo.ci_hi < hi.ci_lo, "{lo:?} {hi:?}");
    let (lo, hi) = (p(0.15, Phase::Vacant), p(0.6, Phase::Vacant));
    assert!(lo.ci_lo > hi.ci_hi, "{lo:?} {hi:?}");
}

#[test]
fn empty_seed_cluster_is_the_segment() {
    let seed = Rect::unit_interval(0);
    let d = cluster_diameter(&[], &seed, 10.0);
    assert_eq!(d.diameter, 1.0);
    assert!(!d.censored);
    let one = [Grain::new(Point::new(0.5, 0.0), 2.0)];
    assert!((cluster_diameter(&one, &seed, 10.0).diameter - 4.0).abs() < 1e-12);
}

#[test]
fn sparse_lambda_d_settles() {
    let e = estimate_lambda_d(0.01, &RadiusLaw::fixed(1.0), 4, 400, &RngStream::new(6)).unwrap();
    assert!(e.settled && !e.unreliable);
    assert!(e.mean_diameter.mean >= 1.0 && e.mean_diameter.mean < 2.5);
}

#[test]
fn e_event_bounds_are_consistent() {
    let law = RadiusLaw::fixed(0.5);
    let r = estimate_e_event(0.05, &law, 8, 2000, &RngStream::new(7)).unwrap();
    assert!(r.lower_bound <= r.truncated.point);
    assert!(r.truncated.successes <= r.empty_start.successes);
    let z = (r.empty_start.point - r.empty_start_exact) / r.empty_start.std_error().max(1e-9);
    assert!(z.abs() < 4.0, "{} vs {}", r.empty_start.point, r.empty_start_exact);
    assert!(estimate_e_event(0.05, &law, 1, 10, &RngStream::new(7)).is_err());
}

#[test]
fn coverage_shrinks_as_reach_grows() {
    let window = Rect::from_bounds(0.0, 4.0, 0.0, 4.0).unwrap();
    let law = RadiusLaw::pareto(2.5, 0.5);
    let rows = coverage_profile(0.3, &law, &window, &[0.5, 2.0, 8.0], 200, 500, &RngStream::new(9)).unwrap();
    for w in rows.windows(2) {
        assert!(w[0].grains <= w[1].grains);
        assert!(w[0].vacant.mean >= w[1].vacant.mean);
    }
}
