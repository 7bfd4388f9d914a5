use proptest::prelude::*;

use cslgeom::pinch::{
    classify, optimal_eps, reference_constants, threshold_basic, threshold_eps, threshold_main,
    threshold_main1, threshold_main3, threshold_main_closed, threshold_tg, Threshold,
};
use cslgeom::sample::{self, evaluate};
use cslgeom::zoo::{calabi_product, totally_geodesic};
use cslgeom::{Error, FundamentalData};

proptest! {
    #[test]
    fn every_eps_bound_is_below_basic(n in 3usize..40, h2 in 0.0f64..50.0, eps in 1e-4f64..10.0) {
        let basic = threshold_basic(n, h2);
        let v = threshold_eps(n, h2, eps).unwrap();
        prop_assert!(v <= basic + 1e-12 * (1.0 + basic.abs()));
    }

    #[test]
    fn optimal_eps_attains_basic(n in 3usize..40, h2 in 1e-3f64..50.0) {
        let star = optimal_eps(n, h2);
        prop_assert!((star - (h2 / (4.0 * n as f64 + h2)).sqrt()).abs() < 1e-15);
        let v = threshold_eps(n, h2, star).unwrap();
        prop_assert!((v - threshold_basic(n, h2)).abs() < 1e-10 * (1.0 + v.abs()));
    }

    #[test]
    fn main_is_eps_one_and_below_basic(n in 3usize..64, h2 in 0.0f64..30.0) {
        let main = threshold_main(n, h2);
        prop_assert_eq!(main, threshold_eps(n, h2, 1.0).unwrap());
        prop_assert!((main - threshold_main_closed(n, h2)).abs() < 1e-12 * (1.0 + main.abs()));
        prop_assert!(main <= threshold_basic(n, h2) + 1e-12);
    }

    #[test]
    fn tg_bound_is_the_weakest(n in 3usize..64, h2 in 0.0f64..30.0) {
        prop_assert!(threshold_tg(n, h2) <= threshold_basic(n, h2) + 1e-12);
    }

    #[test]
    fn classify_margin_is_threshold_minus_norm(n in 3usize..6, r1 in 0.2f64..0.95) {
        let fam = calabi_product(n, r1, (1.0 - r1 * r1).sqrt()).unwrap();
        let f = evaluate(&fam, &vec![1.0; n]).unwrap().fund;
        let gap = classify(std::slice::from_ref(&f), n, 1e-7).unwrap();
        for t in Threshold::ALL {
            let e = gap.entry(t.name()).unwrap();
            prop_assert_eq!(e.pointwise_margin_min, t.value(n, f.norm_h2) - f.norm_b2);
            prop_assert_eq!(e.hypothesis_holds, e.pointwise_margin_min >= -1e-7);
        }
    }
}

#[test]
fn nonpositive_eps_is_rejected() {
    assert!(matches!(threshold_eps(4, 1.0, 0.0), Err(Error::NonpositiveEpsilon(_))));
    assert!(matches!(threshold_eps(4, 1.0, -0.5), Err(Error::NonpositiveEpsilon(_))));
}

#[test]
fn dimension_seventeen() {
    let base = threshold_main1(17, 0.0);
    for h2 in [0.1, 1.0, 7.5, 100.0] {
        assert_eq!(threshold_main1(17, h2), base);
    }
    assert_eq!(threshold_main3(17), 12.0);
    for n in 3..=64usize {
        let nf = n as f64;
        assert!(4.0 * (nf - 1.0) / nf <= 2.0 * (nf + 1.0) / 3.0);
        let low = 2.0 * (nf + 1.0) / 3.0;
        let high = 2.0 * ((3.0 * nf - 2.0).sqrt() - 1.0);
        assert_eq!(threshold_main3(n), low.min(high), "n = {n}");
    }
}

#[test]
fn reference_constants_values() {
    let r = reference_constants(3, 3);
    assert!((r.simons - 3.0 / (2.0 - 1.0 / 3.0)).abs() < 1e-15);
    assert!((r.lili - 2.0).abs() < 1e-15);
}

#[test]
fn totally_geodesic_satisfies_every_hypothesis() {
    let fam = totally_geodesic(4).unwrap();
    let mut rng = sample::rng(3);
    let funds: Vec<FundamentalData> = sample::random_family_points(&fam, 8, &mut rng)
        .iter()
        .map(|u| evaluate(&fam, u).unwrap().fund)
        .collect();
    let gap = classify(&funds, 4, 1e-7).unwrap();
    assert!(gap.thresholds.iter().all(|e| e.hypothesis_holds));
    assert_eq!(gap.thresholds.len(), Threshold::ALL.len());
}

#[test]
fn classify_rejects_bad_input() {
    assert!(matches!(classify(&[], 3, 1e-7), Err(Error::EmptySampleSet)));
    let f = evaluate(&totally_geodesic(2).unwrap(), &[1.0, 1.0]).unwrap().fund;
    assert!(matches!(classify(std::slice::from_ref(&f), 3, 1e-7), Err(Error::WrongDimension { .. })));
    assert!(classify(std::slice::from_ref(&f), 2, 0.0).is_err());
    let gap = classify(&[f], 2, 1e-7).unwrap();
    assert_eq!(gap.thresholds.len(), 1);
}
