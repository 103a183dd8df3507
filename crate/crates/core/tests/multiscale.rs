use proptest::prelude::*;

use vacancy_core::geometry::Orientation;
use vacancy_core::model::{RadiusLaw, RngStream};
use vacancy_core::multiscale::{
    bound_chain, bound_chain_with_tail, crosses_short_way, estimate_f, estimate_h_j, exact_g, exact_j,
    markov_bound_g, strip_sequence, summability_certificate, CertificateVerdict, ScaleLadder, C1, C2,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn chain_bounds_follow_the_recursion(f0 in 0.0..0.2f64, g in prop::collection::vec(0.0..0.003f64, 1..12)) {
        let r = bound_chain(f0, &g, C2);
        let mut prev = f0;
        for (f, gn) in r.f_bounds.iter().zip(&g) {
            prop_assert!((f - (prev / C2 + gn)).abs() <= 1e-15);
            prev = *f;
        }
        let listed: f64 = r.f_bounds.iter().sum::<f64>() + g.iter().sum::<f64>();
        prop_assert!(r.total_bound + 1e-15 >= listed);
        prop_assert!(r.coarse_total_bound + 1e-15 >= r.total_bound);
        prop_assert_eq!(r.applicable, f0 <= 1.0 / C2 && g.iter().sum::<f64>() <= 1.0 / (C2 * C2));
    }

    #[test]
    fn chain_tail_only_adds(f0 in 0.0..0.1f64, g in prop::collection::vec(0.0..0.001f64, 1..6), tail in 0.0..0.001f64) {
        let a = bound_chain(f0, &g, C2);
        let b = bound_chain_with_tail(f0, &g, tail, C2);
        prop_assert!(b.total_bound >= a.total_bound);
        prop_assert!((b.sum_g - a.sum_g - tail).abs() <= 1e-15);
    }

    #[test]
    fn exact_g_respects_markov(alpha in 0.5..50.0f64, lambda in 0.001..0.5f64, kappa in 10.0..500.0f64, tau in 2.1..5.0f64) {
        let law = RadiusLaw::pareto(tau, 1.0);
        let g = exact_g(alpha, lambda, &law, kappa).unwrap();
        prop_assert!((0.0..=1.0).contains(&g));
        prop_assert!(g <= markov_bound_g(alpha, lambda, &law, kappa) * (1.0 + 1e-9));
        prop_assert!(exact_g(alpha, lambda, &law, 2.0 * kappa).unwrap() >= g - 1e-12);
    }

    #[test]
    fn strips_alternate_and_cross(base in 1.0..20.0f64, n_max in 2u32..7) {
        let s = strip_sequence(base, n_max).unwrap();
        prop_assert_eq!(s.len(), n_max as usize);
        for (k, w) in s.windows(2).enumerate() {
            prop_assert!(crosses_short_way(&w[0], &w[1]), "S_{} vs S_{}", k + 1, k + 2);
            prop_assert_ne!(w[0].orientation(), w[1].orientation());
        }
        prop_assert_eq!(s[0].orientation(), Orientation::Horizontal);
    }
}

#[test]
fn bounded_law_kills_g_beyond_its_support() {
    let law = RadiusLaw::fixed(1.0);
    assert_eq!(exact_g(4.0, 0.1, &law, 100.0).unwrap(), 0.0);
    assert!(exact_g(0.5, 0.1, &law, 100.0).unwrap() > 0.0);
    assert!(exact_g(1.0, 0.1, &law, 5.0).is_err());
}

#[test]
fn f_grows_with_intensity() {
    let law = RadiusLaw::fixed(1.0);
    let lo = estimate_f(4.0, 0.05, &law, 2000, &RngStream::new(1)).unwrap();
    let hi = estimate_f(4.0, 0.6, &law, 2000, &RngStream::new(1)).unwrap();
    assert!(lo.ci_hi < hi.ci_lo, "{lo:?} {hi:?}");
    assert_eq!(C1, 1369.0);
}

#[test]
fn supercritical_ladder_is_not_certified() {
    let ladder = ScaleLadder {
        base: 8.0,
        lambda: 0.5,
        law: RadiusLaw::fixed(1.0),
        kappa: 100.0,
        n_max: 4,
    };
    let r = summability_certificate(&ladder, 1, 500, &RngStream::new(2)).unwrap();
    assert_ne!(r.verdict, CertificateVerdict::Pass);
    assert!(!r.chain.applicable);
}

#[test]
fn heavy_tail_j_is_positive_and_bounded() {
    let ladder = ScaleLadder {
        base: 8.0,
        lambda: 0.01,
        law: RadiusLaw::pareto(2.5, 1.0),
        kappa: 1e3,
        n_max: 4,
    };
    let j = exact_j(&ladder, 1).unwrap();
    assert!(j > 0.0 && j < 1.0);
    let e = estimate_h_j(1, &ladder, 500, &RngStream::new(3)).unwrap();
    assert_eq!(e.j, j);
    assert!(e.union_lo <= e.union_point && e.union_point <= e.union_hi);
    assert_eq!(e, estimate_h_j(1, &ladder, 500, &RngStream::new(3)).unwrap());
}

#[test]
fn ladder_validation() {
    let ok = ScaleLadder {
        base: 8.0,
        lambda: 0.02,
        law: RadiusLaw::fixed(1.0),
        kappa: 1e3,
        n_max: 3,
    };
    assert!(ok.validate().is_ok());
    assert_eq!(ok.alpha(2), 800.0);
    assert!(ScaleLadder { kappa: 2.0, ..ok.clone() }.validate().is_err());
    assert!(ScaleLadder { lambda: -1.0, ..ok.clone() }.validate().is_err());
    assert!(ScaleLadder { n_max: 0, ..ok }.validate().is_err());
}
