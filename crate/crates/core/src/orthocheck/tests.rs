use num_rational::BigRational;
use num_traits::Zero;

use super::*;
use crate::bundles;
use crate::verdict::Status;
use crate::scalar::SpecScalar;
use crate::weights::{shift_exact, LogProductSeries, WeightSpec};

fn cfg() -> OrthoConfig {
    OrthoConfig::default()
}

#[test]
fn ratio_series_is_exactly_antisymmetric() {
    let (u, v) = bundles::sparse_swap(4);
    let su: LogProductSeries<f64> = LogProductSeries::build(&u, 500).unwrap();
    let sv = LogProductSeries::build(&v, 500).unwrap();
    let uv = RatioSeries::build(&su, &sv);
    let vu = RatioSeries::build(&sv, &su);
    for n in 0..=500 {
        assert_eq!(uv.lambdas_log[n], -vu.lambdas_log[n]);
    }
}

#[test]
fn sparse_swap_log_ratio_block_values() {
    // within the k-th block the ratio runs 1/(2k), 1, 2k, 1, then returns to 1
    let (u, v) = bundles::sparse_swap(4);
    let su: LogProductSeries<f64> = LogProductSeries::build(&u, 2000).unwrap();
    let sv = LogProductSeries::build(&v, 2000).unwrap();
    let r = RatioSeries::build(&su, &sv);
    for k in 1..=3u32 {
        let base = 5 * 4usize.pow(k);
        let lk = (2.0 * k as f64).ln();
        assert!((r.lambdas_log[base + 1] + lk).abs() < 1e-12, "k={k} at +1");
        assert!((r.lambdas_log[base + 2]).abs() < 1e-12, "k={k} at +2");
        assert!((r.lambdas_log[base + 3] - lk).abs() < 1e-12, "k={k} at +3");
        assert!((r.lambdas_log[base + 4]).abs() < 1e-12, "k={k} at +4");
    }
    // products agree at every multiple of five (difference exactly 0)
    for m in 1..=400 {
        assert_eq!(r.lambdas_log[5 * m], 0.0, "m = {m}");
    }
}

#[test]
fn similarity_scaled_copies_with_equal_moduli() {
    let base = WeightSpec::constant(1.0);
    let u = WeightSpec::scaled(SpecScalar::from_f64(2.0), base.clone());
    let v = WeightSpec::scaled(SpecScalar::from_f64(-2.0), base);
    let verdict = similarity_test::<f64>(&u, &v, 1000, &cfg()).unwrap();
    assert!(verdict.status.established());
}

#[test]
fn similarity_constants_two_three_refuted() {
    let (u, v) = bundles::scaled_2_3();
    let verdict = similarity_test::<f64>(&u, &v, 1000, &cfg()).unwrap();
    assert!(verdict.status.refuted());
    assert_eq!(verdict.rule, Rule::RatioDivergence);
}

#[test]
fn similarity_sparse_swap_refuted_by_oscillation() {
    let (u, v) = bundles::sparse_swap(4);
    let verdict = similarity_test::<f64>(&u, &v, 100_000, &cfg()).unwrap();
    assert!(verdict.status.refuted());
    assert_eq!(verdict.rule, Rule::RatioOscillation);
}

#[test]
fn similarity_telescope_pair_established() {
    let (u, v) = bundles::telescope_drift(1.0);
    let verdict = similarity_test::<f64>(&u, &v, 10_000, &cfg()).unwrap();
    assert!(verdict.status.established());
}

#[test]
fn window_scaled_pair_established() {
    // log lambda_{n+d} = (n+d) ln(2/3) -> windowed max escapes below any bound
    let w = WeightSpec::constant(1.0);
    let u = WeightSpec::scaled(SpecScalar::from_f64(2.0), w.clone());
    let v = WeightSpec::scaled(SpecScalar::from_f64(3.0), w);
    let verdict = window_orthogonality_test::<f64>(&u, &v, 4, 100_000, &cfg()).unwrap();
    assert!(verdict.status.established());
}

#[test]
fn window_identical_pair_undecided() {
    let u = WeightSpec::constant(2.0);
    let verdict = window_orthogonality_test::<f64>(&u, &u, 4, 10_000, &cfg()).unwrap();
    assert_eq!(verdict.status, Status::Undecided);
}

#[test]
fn window_sparse_swap_undecided() {
    // every length-5 block contains an index with log lambda = 0
    let (u, v) = bundles::sparse_swap(4);
    let verdict = window_orthogonality_test::<f64>(&u, &v, 4, 100_000, &cfg()).unwrap();
    assert_eq!(verdict.status, Status::Undecided);
}

#[test]
fn scalar_pair_decisions() {
    let two = SpecScalar::from_f64(2.0);
    let three = SpecScalar::from_f64(3.0);
    let minus_two = SpecScalar::from_f64(-2.0);
    assert!(scalar_pair_test("B", &two, &three).unwrap().status.established());
    assert!(scalar_pair_test("B", &two, &two).unwrap().status.refuted());
    assert!(scalar_pair_test("B", &two, &minus_two).unwrap().status.refuted());
    assert!(matches!(
        scalar_pair_test("B", &SpecScalar::from_f64(0.0), &two),
        Err(Error::ZeroScalar)
    ));
}

#[test]
fn scalar_pair_invariant_under_common_phase() {
    // multiply both scalars by a unimodular complex factor
    let (c, s) = (0.6f64, 0.8f64);
    let a = SpecScalar::complex(2.0 * c, 2.0 * s);
    let b = SpecScalar::complex(3.0 * c, 3.0 * s);
    assert!(scalar_pair_test("B", &a, &b).unwrap().status.established());
    let a2 = SpecScalar::complex(2.0 * c, -2.0 * s);
    let b2 = SpecScalar::complex(-2.0, 0.0);
    assert!(scalar_pair_test("B", &a2, &b2).unwrap().status.refuted());
}

#[test]
fn periodic_witness_prefix_cycle() {
    // u = 2, 2, 2, ...; v = 3, 2, 2, ...: identity holds on odd indices with
    // period two and C = 2/3
    let (u, v) = bundles::prefix_cycle();
    let w = shared_periodic_point::<f64>(&u, &v, 2.0, 10_000, &cfg())
        .unwrap()
        .expect("witness");
    assert_eq!((w.d, w.j), (2, 1));
    assert_eq!(w.c, SpecScalar::from_ratio(2, 3));
    assert!(w.exact);

    // the witness vector is reproduced exactly by d applications of either shift
    let exact = w.vector_exact.as_ref().unwrap();
    for spec in [&u, &v] {
        let mut coords = exact.clone();
        for _ in 0..w.d {
            coords = shift_exact(spec, &coords).unwrap();
        }
        for (j, y) in coords.iter().enumerate() {
            assert_eq!(y, &exact[j], "{spec:?} coordinate {j}");
        }
    }
}

#[test]
fn periodic_witness_sparse_swap() {
    // with ratio 4 the exceptional positions inside each block are odd, so
    // the products already agree along even indices: the minimal witness has
    // period two. The period-five identity holds as well and is checked
    // separately below.
    let (u, v) = bundles::sparse_swap(4);
    let w = shared_periodic_point::<f64>(&u, &v, 2.0, 100_000, &cfg())
        .unwrap()
        .expect("witness");
    assert_eq!((w.d, w.j), (2, 0));
    assert_eq!(w.c, SpecScalar::one());
    assert!(w.exact);
    let exact = w.vector_exact.as_ref().unwrap();
    assert!(!exact[0].is_zero());
    for spec in [&u, &v] {
        let mut coords = exact.clone();
        for _ in 0..w.d {
            coords = shift_exact(spec, &coords).unwrap();
        }
        for (j, y) in coords.iter().enumerate() {
            assert_eq!(y, &exact[j]);
        }
    }
}

#[test]
fn periodic_identity_holds_at_period_five() {
    let (u, v) = bundles::sparse_swap(4);
    let w = verify_periodic_identity::<f64>(&u, &v, 5, 0, 100_000, &cfg())
        .unwrap()
        .expect("period-five identity");
    assert_eq!(w.c, SpecScalar::one());
    assert!(w.exact && w.checked_m >= 1000);
    let exact = w.vector_exact.as_ref().unwrap();
    for spec in [&u, &v] {
        let mut coords = exact.clone();
        for _ in 0..5 {
            coords = shift_exact(spec, &coords).unwrap();
        }
        for (j, y) in coords.iter().enumerate() {
            assert_eq!(y, &exact[j]);
        }
    }
    // period five is not an identity for every (d, j) - sanity-check a few
    assert!(verify_periodic_identity::<f64>(&u, &v, 5, 1, 100_000, &cfg())
        .unwrap()
        .is_none());
    assert!(verify_periodic_identity::<f64>(&u, &v, 3, 0, 100_000, &cfg())
        .unwrap()
        .is_none());
}

#[test]
fn no_periodic_witness_for_distinct_constants() {
    let (u, v) = bundles::scaled_2_3();
    let w = shared_periodic_point::<f64>(&u, &v, 2.0, 10_000, &cfg()).unwrap();
    assert!(w.is_none());
}

#[test]
fn no_periodic_witness_for_telescope_pair() {
    let (u, v) = bundles::telescope_drift(1.0);
    let w = shared_periodic_point::<f64>(&u, &v, 2.0, 50_000, &cfg()).unwrap();
    assert!(w.is_none());
}

#[test]
fn periodic_requires_summability() {
    let u = WeightSpec::constant(1.0);
    let r = shared_periodic_point::<f64>(&u, &u, 2.0, 1000, &cfg());
    assert!(matches!(r, Err(Error::NotSummable(_))));
}

#[test]
fn report_scaled_2_3_is_orthogonal() {
    let (u, v) = bundles::scaled_2_3();
    let report = orthogonality_report::<f64>(&u, &v, 2.0, 4, 50_000, &cfg()).unwrap();
    assert_eq!(report.summary, Summary::Orthogonal);
    assert!(report.periodic_witness.is_none());
}

#[test]
fn report_sparse_swap_not_orthogonal_not_similar() {
    let (u, v) = bundles::sparse_swap(4);
    let report = orthogonality_report::<f64>(&u, &v, 2.0, 4, 100_000, &cfg()).unwrap();
    assert_eq!(report.summary, Summary::NotOrthogonal);
    let w = report.periodic_witness.as_ref().expect("witness");
    assert_eq!((w.d, w.j), (2, 0));
    let similarity = &report.verdicts[0];
    assert!(similarity.status.refuted());
}

#[test]
fn report_telescope_not_orthogonal_via_gaussian() {
    let (u, v) = bundles::telescope_drift(1.0);
    let report = orthogonality_report::<f64>(&u, &v, 2.0, 4, 100_000, &cfg()).unwrap();
    assert_eq!(report.summary, Summary::NotOrthogonal);
    assert!(report.periodic_witness.is_none());
    let gaussian = report
        .verdicts
        .iter()
        .find(|v| v.rule == Rule::GaussianEquivalence)
        .unwrap();
    assert!(gaussian.status.established());
}

#[test]
fn report_serializes_with_rule_names() {
    let (u, v) = bundles::scaled_2_3();
    let report = orthogonality_report::<f64>(&u, &v, 2.0, 4, 20_000, &cfg()).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["summary"], "Orthogonal");
    assert!(json["verdicts"].as_array().unwrap().len() >= 5);
    assert!(json["verdicts"][0]["rule"].is_string());
}

#[test]
fn witness_vector_lies_in_lp() {
    let (u, v) = bundles::sparse_swap(4);
    let w = shared_periodic_point::<f64>(&u, &v, 2.0, 100_000, &cfg())
        .unwrap()
        .unwrap();
    let norm = crate::weights::lp_norm(&w.vector, 2.0);
    assert!(norm.is_finite() && norm > 1.0);
    // coordinates decay: the last supported coordinate is tiny
    let last = w.vector.iter().rev().find(|z| z.norm() > 0.0).unwrap();
    assert!(last.norm() < 1e-6);
}

#[test]
fn exact_ratio_cache_matches_bigrational_products() {
    let (u, v) = bundles::prefix_cycle();
    let mut cache = ExactRatios::new(&u, &v);
    // lambda_1 = 2/3, lambda_2 = 4/6 = 2/3, lambda_3 = 8/12 = 2/3
    let expected = BigRational::new(2.into(), 3.into());
    for n in 1..=3 {
        assert_eq!(cache.get(n).unwrap(), &expected);
    }
}
