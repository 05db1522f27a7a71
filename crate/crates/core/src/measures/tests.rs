use super::*;
use crate::stats::{ks_critical, ks_two_sample};
use crate::weights::WeightSpec;

fn wcfg() -> WeightsConfig {
    WeightsConfig::default()
}

fn gaussian_product(sigma: f64, w: f64, p: f64, horizon: usize) -> InvariantProductMeasure<f64> {
    InvariantProductMeasure::new(
        MarginalMeasure::gaussian(sigma, Field::Real),
        WeightSpec::constant(w),
        p,
        horizon,
    )
    .unwrap()
}

#[test]
fn marginal_scaling_gaussian() {
    let m = gaussian_product(1.0, 2.0, 2.0, 64);
    // sigma_3 = 1 / (2*2*2)
    match m.marginal_at(3).unwrap() {
        MarginalMeasure::Gaussian { sigma, .. } => assert!((sigma - 0.125).abs() < 1e-15),
        other => panic!("unexpected kind {other:?}"),
    }
    // n = 0 returns mu0 unchanged
    assert_eq!(m.marginal_at(0).unwrap(), *m.mu0());
}

#[test]
fn marginal_scaling_uniform() {
    let m: InvariantProductMeasure<f64> = InvariantProductMeasure::new(
        MarginalMeasure::uniform(1.0, 3.0),
        WeightSpec::constant(2.0),
        1.0,
        16,
    )
    .unwrap();
    match m.marginal_at(1).unwrap() {
        MarginalMeasure::UniformInterval { a, b } => {
            assert!((a - 0.5).abs() < 1e-15 && (b - 1.5).abs() < 1e-15);
        }
        other => panic!("unexpected kind {other:?}"),
    }
}

#[test]
fn moment_identity_gaussian_four_thirds() {
    let m = gaussian_product(1.0, 2.0, 2.0, 2048);
    let id = m.moment_identity(&wcfg()).unwrap();
    assert!((id.rhs_closed - 4.0 / 3.0).abs() < 1e-12, "rhs {}", id.rhs_closed);
    assert!((id.lhs_truncated - id.rhs_closed).abs() < 1e-12);
}

#[test]
fn moment_identity_degenerate_discrete() {
    let m: InvariantProductMeasure<f64> = InvariantProductMeasure::new(
        MarginalMeasure::discrete(vec![1.0], vec![1.0]),
        WeightSpec::constant(2.0),
        1.0,
        2048,
    )
    .unwrap();
    let id = m.moment_identity(&wcfg()).unwrap();
    // E|s| = 1 and sum 2^{-n} = 1
    assert!((id.rhs_closed - 2.0).abs() < 1e-12);
}

#[test]
fn moment_identity_monte_carlo_gaussian_and_uniform() {
    // Monte Carlo mass against the closed form for both marginal families
    // and both exponents (weight 2 throughout)
    let marginals: [MarginalMeasure<f64>; 2] = [
        MarginalMeasure::gaussian(1.0, Field::Real),
        MarginalMeasure::uniform(-1.0, 2.0),
    ];
    for mu0 in marginals {
        for p in [1.0f64, 2.0] {
            let m = InvariantProductMeasure::new(
                mu0.clone(),
                WeightSpec::constant(2.0),
                p,
                2048,
            )
            .unwrap();
            let id = m.moment_identity(&wcfg()).unwrap();
            let truncation = m.default_truncation(1e-12, &wcfg()).unwrap();
            let sums: Vec<f64> = m
                .sample_many(20_000, truncation, 314)
                .unwrap()
                .into_iter()
                .map(|x| x.iter().map(|z| z.norm().powf(p)).sum())
                .collect();
            let mean = crate::stats::mean(&sums);
            let se = crate::stats::std_error(&sums);
            assert!(
                (mean - id.rhs_closed).abs() <= 3.0 * se,
                "{mu0:?}, p = {p}: mean {mean} vs rhs {} (3 SE = {})",
                id.rhs_closed,
                3.0 * se
            );
        }
    }
    // spot value: E|t| for U(-1, 2) is 5/6 and S_1 = 1 for weight 2
    let m: InvariantProductMeasure<f64> = InvariantProductMeasure::new(
        MarginalMeasure::uniform(-1.0, 2.0),
        WeightSpec::constant(2.0),
        1.0,
        2048,
    )
    .unwrap();
    let id = m.moment_identity(&wcfg()).unwrap();
    assert!((id.rhs_closed - 5.0 / 3.0).abs() < 1e-12, "rhs {}", id.rhs_closed);
}

#[test]
fn moment_identity_needs_summability() {
    let m = InvariantProductMeasure::new(
        MarginalMeasure::gaussian(1.0, Field::Real),
        WeightSpec::constant(1.0),
        2.0,
        512,
    )
    .unwrap();
    assert!(matches!(m.moment_identity(&wcfg()), Err(Error::NotSummable(_))));
}

#[test]
fn degenerate_sample_is_reciprocal_products() {
    let m = InvariantProductMeasure::new(
        MarginalMeasure::discrete(vec![1.0], vec![1.0]),
        WeightSpec::constant(2.0),
        1.0,
        16,
    )
    .unwrap();
    let x = m.sample(3, 42).unwrap();
    let expect = [1.0f64, 0.5, 0.25, 0.125];
    for (z, e) in x.iter().zip(expect) {
        assert!((z.re - e).abs() <= 1e-15 * e);
        assert_eq!(z.im, 0.0);
    }
}

#[test]
fn sampling_is_seed_deterministic() {
    let m = gaussian_product(1.0, 2.0, 2.0, 64);
    let a = m.sample_many(32, 8, 7).unwrap();
    let b = m.sample_many(32, 8, 7).unwrap();
    assert_eq!(a, b);
    let c = m.sample_many(32, 8, 8).unwrap();
    assert_ne!(a, c);
}

#[test]
fn pushforward_consistency_kolmogorov_smirnov() {
    // law of sample()[n] must match marginal_at(n), per coordinate
    let m = gaussian_product(1.0, 2.0, 2.0, 64);
    let samples = m.sample_many(10_000, 4, 11).unwrap();
    for n in [1usize, 3] {
        let coord: Vec<f64> = samples.iter().map(|x| x[n].re).collect();
        let marginal = m.marginal_at(n).unwrap();
        let mut rng = crate::rngutil::stream_rng(999, n as u64);
        let fresh: Vec<f64> = (0..10_000)
            .map(|_| sample_marginal(&marginal, &mut rng).re)
            .collect();
        let d = ks_two_sample(&coord, &fresh);
        let crit = ks_critical::<f64>(coord.len(), fresh.len(), 0.01);
        assert!(d < crit, "coordinate {n}: D = {d}, critical = {crit}");
    }
}

#[test]
fn shift_invariance_at_sample_level() {
    // if x ~ m truncated at N, then (w_1 x_1, ..., w_N x_N) is a truncation
    // at N-1 of the same law: compare coordinate marginals by KS
    let m = gaussian_product(1.0, 2.0, 2.0, 64);
    let samples = m.sample_many(4000, 6, 13).unwrap();
    let fresh = m.sample_many(4000, 6, 14).unwrap();
    for j in [0usize, 2, 4] {
        // (B x)_j = w_{j+1} x_{j+1} with w = 2
        let shifted: Vec<f64> = samples.iter().map(|x| 2.0 * x[j + 1].re).collect();
        let direct: Vec<f64> = fresh.iter().map(|x| x[j].re).collect();
        let d = ks_two_sample(&shifted, &direct);
        let crit = ks_critical::<f64>(shifted.len(), direct.len(), 0.01);
        assert!(d < crit, "coordinate {j}: D = {d}, critical = {crit}");
    }
}

#[test]
fn symmetrize_gaussian_unchanged() {
    let g = MarginalMeasure::gaussian(2.0, Field::Real);
    assert_eq!(g.symmetrize_phase(Field::Real).unwrap(), g);
    let gc = MarginalMeasure::gaussian(2.0, Field::Complex);
    assert_eq!(gc.symmetrize_phase(Field::Complex).unwrap(), gc);
}

#[test]
fn symmetrize_discrete_reflects_support() {
    let mu = MarginalMeasure::discrete(vec![2.0], vec![1.0]);
    match mu.symmetrize_phase(Field::Real).unwrap() {
        MarginalMeasure::DiscreteGroup { support, weights } => {
            assert_eq!(support, vec![-2.0, 2.0]);
            assert_eq!(weights, vec![0.5, 0.5]);
        }
        other => panic!("unexpected kind {other:?}"),
    }
}

#[test]
fn symmetrize_uniform_conserves_mass_exactly() {
    let mu: MarginalMeasure<f64> = MarginalMeasure::uniform(1.0, 3.0);
    let sym = mu.symmetrize_phase(Field::Real).unwrap();
    sym.validate().unwrap();
    // half the mass on each side (up to the straddling-cell resolution)
    let left = sym.interval_mass(-3.0, -1.0);
    assert!((left - 0.5).abs() < 1e-3, "left mass {left}");
    // total mass is conserved exactly by construction
    assert!((sym.total_mass() - 1.0).abs() < 1e-12);
}

#[test]
fn symmetrize_complex_non_gaussian_unsupported() {
    let mu = MarginalMeasure::discrete(vec![1.0], vec![1.0]);
    assert!(matches!(
        mu.symmetrize_phase(Field::Complex),
        Err(Error::UnsupportedKind(_))
    ));
}

#[test]
fn tail_probabilities() {
    let g: MarginalMeasure<f64> = MarginalMeasure::gaussian(1.0, Field::Real);
    // P(|N(0,1)| > 1) = erfc(1/sqrt 2) = 0.3173...
    assert!((g.tail_prob(1.0) - 0.317_310_507_862_914).abs() < 1e-12);
    let u: MarginalMeasure<f64> = MarginalMeasure::uniform(-1.0, 3.0);
    assert!((u.tail_prob(1.0) - 0.5).abs() < 1e-15);
    let d: MarginalMeasure<f64> = MarginalMeasure::discrete(vec![1.0, -2.0], vec![0.25, 0.75]);
    assert!((d.tail_prob(1.5) - 0.75).abs() < 1e-15);
    assert_eq!(d.tail_prob(2.5), 0.0);
}

#[test]
fn ell1_support_gaussian_fast_weights() {
    let v = ell1_support_test(
        &MarginalMeasure::gaussian(1.0, Field::Real),
        &WeightSpec::constant(4.0),
        &EpsilonSeq::Geometric { q: 0.5 },
        2000,
        &wcfg(),
    )
    .unwrap();
    assert!(v.status.established());
}

#[test]
fn ell1_support_bounded_marginal() {
    // |w_1..w_n| eps_n = 1 and the marginal has no mass beyond |t| = 1
    let v = ell1_support_test(
        &MarginalMeasure::discrete(vec![1.0], vec![1.0]),
        &WeightSpec::constant(2.0),
        &EpsilonSeq::Geometric { q: 0.5 },
        2000,
        &wcfg(),
    )
    .unwrap();
    assert!(v.status.established());
}

#[test]
fn ell1_support_requires_summable_epsilons() {
    let r = ell1_support_test(
        &MarginalMeasure::gaussian(1.0, Field::Real),
        &WeightSpec::constant(4.0),
        &EpsilonSeq::InversePower { power: 1.0 },
        2000,
        &wcfg(),
    );
    assert!(matches!(r, Err(Error::ConfigError(_))));
}

#[test]
fn unbounded_products_leave_c0_empirically() {
    // with |w_1..w_n| not tending to infinity and mu0 != delta_0, sampled
    // sequences do not tend to zero
    let m = InvariantProductMeasure::new(
        MarginalMeasure::gaussian(1.0, Field::Real),
        WeightSpec::constant(1.0),
        2.0,
        256,
    )
    .unwrap();
    let x = m.sample_with(256, &mut crate::rngutil::stream_rng(3, 0)).unwrap();
    let tail_sup = x[128..].iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    assert!(tail_sup > 0.5, "tail sup {tail_sup}");
}

#[test]
fn default_truncation_hits_target() {
    let m = gaussian_product(1.0, 2.0, 2.0, 4096);
    let n = m.default_truncation(1e-12, &wcfg()).unwrap();
    // 4^{-n} tail: need about 20 coordinates
    assert!(n >= 18 && n <= 30, "truncation {n}");
}

#[test]
fn marginal_serde_roundtrip() {
    let mu: MarginalMeasure<f64> = MarginalMeasure::gaussian(1.5, Field::Complex);
    let json = serde_json::to_string(&mu).unwrap();
    assert!(json.contains("\"kind\":\"gaussian\""));
    let back: MarginalMeasure<f64> = serde_json::from_str(&json).unwrap();
    assert_eq!(mu, back);
}
