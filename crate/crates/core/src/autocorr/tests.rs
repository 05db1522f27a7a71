use super::*;
use crate::bundles;

fn qc() -> QuadConfig {
    QuadConfig::default()
}

fn ac() -> AutocorrConfig {
    AutocorrConfig::default()
}

#[test]
fn acf_unit_interval_triangle() {
    let h = DensityProfile::uniform(0.0f64, 1.0);
    for alpha in [-1.5f64, -0.5, 0.0, 0.25, 0.75, 1.0, 2.0] {
        let expect = (1.0 - alpha.abs()).max(0.0);
        let v = acf(&h, alpha, &qc()).unwrap();
        assert!((v - expect).abs() < 1e-12, "alpha = {alpha}");
        let vq = acf_quadrature(&h, alpha, &qc()).unwrap();
        assert!((vq - expect).abs() < 1e-9, "alpha = {alpha} (quadrature)");
    }
}

#[test]
fn acf_at_zero_is_norm_squared() {
    for h in [
        DensityProfile::uniform(0.0f64, 1.0),
        DensityProfile::gaussian(1.0),
        DensityProfile::uniform(-2.0, 5.0),
    ] {
        let v = acf(&h, 0.0, &qc()).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let n = h.norm2_sq(&qc()).unwrap();
        assert!((n - 1.0).abs() < 1e-8);
    }
}

#[test]
fn acf_gaussian_closed_form_vs_quadrature() {
    let h = DensityProfile::gaussian(1.0f64);
    for alpha in [0.1, 0.5, 1.0, 2.5] {
        let closed = acf(&h, alpha, &qc()).unwrap();
        assert!((closed - (-alpha * alpha / 8.0).exp()).abs() < 1e-14);
        let quad = acf_quadrature(&h, alpha, &qc()).unwrap();
        assert!((closed - quad).abs() < 1e-8, "alpha = {alpha}");
    }
}

#[test]
fn acf_even_and_maximal_at_zero() {
    let (hp, _) = log_substitution(&DensityProfile::uniform(0.0f64, 1.0));
    let at0 = acf(&hp, 0.0, &qc()).unwrap();
    for alpha in [0.05, 0.3, 0.9, 2.0] {
        let right = acf(&hp, alpha, &qc()).unwrap();
        let left = acf(&hp, -alpha, &qc()).unwrap();
        assert!((right - left).abs() < 1e-10, "alpha = {alpha}");
        assert!(right <= at0 + 1e-10);
    }
}

#[test]
fn theta_uniform_inverse_sqrt() {
    let f = DensityProfile::uniform(0.0f64, 1.0);
    for lambda in [1.0, 1.5, 2.0, 4.0] {
        let v = theta(&f, lambda, &qc()).unwrap();
        assert!((v - lambda.powf(-0.5)).abs() < 1e-12, "lambda = {lambda}");
        let vq = theta_quadrature(&f, lambda, &qc()).unwrap();
        assert!((v - vq).abs() < 1e-9);
    }
    // theta(1) = 1 for any normalized profile
    assert!((theta(&f, 1.0, &qc()).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn theta_symmetry_under_inversion() {
    for f in [DensityProfile::uniform(0.0f64, 1.0), DensityProfile::gaussian(1.0)] {
        for lambda in [0.5, 0.9, 1.1, 2.0, 4.0] {
            let a = theta(&f, lambda, &qc()).unwrap();
            let b = theta(&f, 1.0 / lambda, &qc()).unwrap();
            assert!((a - b).abs() < 1e-8, "lambda = {lambda}");
        }
    }
}

#[test]
fn theta_gaussian_matches_scale_overlap() {
    let f = DensityProfile::gaussian(1.0f64);
    for lambda in [0.5, 1.0, 2.0] {
        let v = theta(&f, lambda, &qc()).unwrap();
        let expect = (2.0 * lambda / (1.0 + lambda * lambda)).sqrt();
        assert!((v - expect).abs() < 1e-14);
        let vq = theta_quadrature(&f, lambda, &qc()).unwrap();
        assert!((v - vq).abs() < 1e-8);
    }
}

#[test]
fn psi_normalization_and_uniform_pair() {
    let f = DensityProfile::uniform(0.0f64, 1.0);
    assert!((psi(&f, &f, 1.0, &qc()).unwrap() - 1.0).abs() < 1e-10);
    // f on [0,1], g on [0,2]: Psi(1) = 1/sqrt(2), the overlap of the laws
    let g = DensityProfile::uniform(0.0f64, 2.0);
    let v = psi(&f, &g, 1.0, &qc()).unwrap();
    assert!((v - 1.0 / 2.0f64.sqrt()).abs() < 1e-9);
}

#[test]
fn psi_reduces_to_theta_for_rescaled_profile() {
    // g(t) = sqrt(a) f(a t) => Psi(lambda) = Theta(lambda / a)
    let f = DensityProfile::uniform(0.0f64, 1.0);
    let a = 2.0f64;
    let g = DensityProfile::uniform(0.0, 1.0 / a);
    for lambda in [0.5, 1.0, 3.0] {
        let lhs = psi(&f, &g, lambda, &qc()).unwrap();
        let rhs = theta(&f, lambda / a, &qc()).unwrap();
        assert!((lhs - rhs).abs() < 1e-8, "lambda = {lambda}: {lhs} vs {rhs}");
    }
}

#[test]
fn psi_gaussian_profiles_reproduce_measure_overlap() {
    let f = DensityProfile::gaussian(1.0f64);
    let g = DensityProfile::gaussian(2.0f64);
    for lambda in [0.5, 1.0, 2.0] {
        let v = psi(&f, &g, lambda, &qc()).unwrap();
        // overlap of N(0, (1/lambda)^2-ish scalings): sqrt(2 l s s' / (l^2 s'^2 + s^2))
        let expect = (2.0 * lambda * 2.0 / (lambda * lambda * 4.0 + 1.0)).sqrt();
        assert!((v - expect).abs() < 1e-12);
    }
}

#[test]
fn log_substitution_splits_unit_mass() {
    let f = DensityProfile::uniform(0.0f64, 1.0);
    let (hp, hm) = log_substitution(&f);
    let np = hp.norm2_sq(&qc()).unwrap();
    let nm = hm.norm2_sq(&qc()).unwrap();
    assert!((np - 1.0).abs() < 1e-8, "positive side {np}");
    assert!(nm.abs() < 1e-12, "negative side {nm}");

    // even profile splits evenly
    let g = DensityProfile::gaussian(1.0f64);
    let (gp, gm) = log_substitution(&g);
    let np = gp.norm2_sq(&qc()).unwrap();
    let nm = gm.norm2_sq(&qc()).unwrap();
    assert!((np - 0.5).abs() < 1e-8);
    assert!((nm - 0.5).abs() < 1e-8);
}

#[test]
fn log_substitution_identity_for_theta() {
    // Theta(lambda) = P h_+(ln lambda) + P h_-(ln lambda)
    for f in [
        DensityProfile::uniform(0.0f64, 1.0),
        DensityProfile::gaussian(1.0),
        DensityProfile::uniform(-1.0, 2.0),
    ] {
        let (hp, hm) = log_substitution(&f);
        for lambda in [0.5, 0.9, 1.0, 1.1, 2.0] {
            let lhs = theta(&f, lambda, &qc()).unwrap();
            let rhs = acf(&hp, lambda.ln(), &qc()).unwrap() + acf(&hm, lambda.ln(), &qc()).unwrap();
            assert!((lhs - rhs).abs() < 1e-8, "lambda = {lambda}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn log_side_maps_discontinuities() {
    // f uniform on [0,1]: h_+ has a single unit jump at ln(1) = 0
    let f = DensityProfile::uniform(0.0f64, 1.0);
    let (hp, _) = log_substitution(&f);
    let jumps = hp.kind.jumps();
    assert_eq!(jumps.len(), 1);
    let (x, l, r) = jumps[0];
    assert!(x.abs() < 1e-14);
    assert!((l - 1.0).abs() < 1e-9 && r.abs() < 1e-14);
}

#[test]
fn one_sided_slope_of_log_uniform_profile() {
    // P h_+(alpha) = e^{-|alpha|/2}: slope at 0+ is exactly -1/2, matching
    // the jump formula -(1/2) * 1^2
    let f = DensityProfile::uniform(0.0f64, 1.0);
    let (hp, _) = log_substitution(&f);
    // closed-form check of the autocorrelation itself
    for alpha in [0.0, 0.3, 1.0] {
        let v = acf(&hp, alpha, &qc()).unwrap();
        assert!((v - (-alpha / 2.0).exp()).abs() < 1e-8, "alpha = {alpha}");
    }
    let s = one_sided_slopes(&hp, &qc()).unwrap();
    assert!((s.jump_formula_value + 0.5).abs() < 1e-9);
    assert!(
        (s.right_slope - s.jump_formula_value).abs() <= 1e-3 * (1.0 + s.jump_formula_value.abs()),
        "slope {} vs jump formula {}",
        s.right_slope,
        s.jump_formula_value
    );
    assert_eq!(s.left_slope, -s.right_slope);
}

#[test]
fn smooth_profile_has_zero_slope_and_quadratic_decay() {
    let g = DensityProfile::gaussian(1.0f64);
    let (gp, _) = log_substitution(&g);
    let s = one_sided_slopes(&gp, &qc()).unwrap();
    assert_eq!(s.jump_formula_value, 0.0);
    assert!(s.right_slope.abs() < 1e-3, "slope {}", s.right_slope);

    // curvature of the direct Gaussian acf: (F(0) - F(alpha)) / alpha^2 -> 1/8
    let h = DensityProfile::gaussian(1.0f64);
    let f0 = acf(&h, 0.0, &qc()).unwrap();
    let mut prev = f64::NAN;
    for alpha in [1e-1, 1e-2, 1e-3] {
        let ratio = (f0 - acf(&h, alpha, &qc()).unwrap()) / (alpha * alpha);
        assert!(ratio > 0.0);
        prev = ratio;
    }
    assert!((prev - 0.125).abs() < 1e-3, "curvature {prev}");
}

#[test]
fn quadratic_rate_diverges_for_profiles_with_jumps() {
    // a profile outside W12 (jump at the support edge) has
    // (acf(0) - acf(alpha)) / alpha^2 growing as alpha -> 0
    let h = DensityProfile::uniform(0.0f64, 1.0);
    let f0 = acf(&h, 0.0, &qc()).unwrap();
    let mut prev = 0.0;
    for alpha in [1e-1, 1e-2, 1e-3] {
        let ratio = (f0 - acf(&h, alpha, &qc()).unwrap()) / (alpha * alpha);
        assert!(ratio > 2.0 * prev, "no growth at alpha = {alpha}");
        prev = ratio;
    }
}

#[test]
fn uniform_profile_linear_decay_rate() {
    // discontinuous case: (acf(0) - acf(alpha)) / |alpha| -> 1/2 for h_+
    let f = DensityProfile::uniform(0.0f64, 1.0);
    let (hp, _) = log_substitution(&f);
    let f0 = acf(&hp, 0.0, &qc()).unwrap();
    let mut last = 0.0;
    for alpha in [1e-1, 1e-2, 1e-3] {
        last = (f0 - acf(&hp, alpha, &qc()).unwrap()) / alpha;
    }
    assert!((last - 0.5).abs() < 1e-3, "rate {last}");
}

#[test]
fn two_unit_jumps_double_the_formula() {
    // grid profile with two unit jumps: value 1 on [0,1] (edges at 0 and 1)
    let h = DensityProfile {
        kind: ProfileKind::Grid {
            lo: 0.0f64,
            hi: 1.0,
            values: vec![1.0; 8],
            discontinuities: vec![],
        },
        smooth_class: SmoothClass::PiecewiseC1,
    };
    let s = one_sided_slopes(&h, &qc()).unwrap();
    assert!((s.jump_formula_value + 1.0).abs() < 1e-9);
}

#[test]
fn slopes_require_declared_class() {
    let mut h = DensityProfile::uniform(0.0f64, 1.0);
    h.smooth_class = SmoothClass::Unknown;
    assert!(matches!(one_sided_slopes(&h, &qc()), Err(Error::NoDiscontinuityList)));
}

#[test]
fn equivalence_regime_linear_criterion() {
    let f = DensityProfile::uniform(0.0f64, 1.0);
    // lambda_n / a = 1 + 1/n^2: linear series sums, non-orthogonality holds
    let (v_spec, u_spec) = bundles::telescope_drift(2.0);
    let verdict = equivalence_regime(&f, &u_spec, &v_spec, 1.0, 50_000, &ac()).unwrap();
    assert!(verdict.status.established(), "evidence {:?}", verdict.evidence);
    assert_eq!(verdict.evidence["criterion"], "linear");

    // lambda_n / a = 1 + 1/n: the linear series diverges -> orthogonal
    let (v_spec, u_spec) = bundles::telescope_drift(1.0);
    let verdict = equivalence_regime(&f, &u_spec, &v_spec, 1.0, 100_000, &ac()).unwrap();
    assert!(verdict.status.refuted(), "evidence {:?}", verdict.evidence);
}

#[test]
fn equivalence_regime_quadratic_criterion() {
    let f = DensityProfile::gaussian(1.0f64);
    // lambda_n / a = 1 + 1/n: quadratic series converges for a smooth profile
    let (v_spec, u_spec) = bundles::telescope_drift(1.0);
    let verdict = equivalence_regime(&f, &u_spec, &v_spec, 1.0, 100_000, &ac()).unwrap();
    assert!(verdict.status.established(), "evidence {:?}", verdict.evidence);
    assert_eq!(verdict.evidence["criterion"], "quadratic");
}

#[test]
fn equivalence_regime_rejects_contradictory_class() {
    let mut f = DensityProfile::uniform(0.0f64, 1.0);
    f.smooth_class = SmoothClass::W12;
    let (u, v) = bundles::telescope_drift(2.0);
    assert!(matches!(
        equivalence_regime(&f, &u, &v, 1.0, 1000, &ac()),
        Err(Error::HypothesisViolation(_))
    ));
}

#[test]
fn limit_scale_detection_cases() {
    let f = DensityProfile::uniform(0.0f64, 1.0);
    // identical profiles, ratio -> 1
    let (u, v) = bundles::telescope_drift(1.0);
    let r = limit_scale_detect(&u, &v, &f, &f, 100_000, &ac()).unwrap();
    assert!(r.a_hat.status.established());
    assert!((r.a_value.unwrap() - 1.0).abs() < 1e-8);
    assert!(r.density_match < 1e-9);

    // distinct constants: no limit in (0, inf)
    let (u, v) = bundles::scaled_2_3();
    let r = limit_scale_detect(&u, &v, &f, &f, 10_000, &ac()).unwrap();
    assert!(r.a_hat.status.refuted());

    // exact rescaling pair: ratio identically 2 with matching density
    let g = DensityProfile::uniform(0.0f64, 0.5);
    let two = WeightSpec::constant(2.0);
    let r = limit_scale_detect(&two, &two, &f, &g, 10_000, &ac()).unwrap();
    // lambda = 1 here, so the match must be tested against a = 1... the pair
    // (f, g) with a = 1 cannot match; rebuild with the u/v pair giving a = 2
    assert!(r.a_hat.status.established());
    assert!(r.density_match > 0.5);
}

#[test]
fn limit_scale_matches_rescaled_density() {
    // u-products / v-products -> 2 exactly: u = prefix [4] then 2, v = const 2
    let u = WeightSpec::prefix_then_constant(vec![4.0], 2.0);
    let v = WeightSpec::constant(2.0);
    let f = DensityProfile::uniform(0.0f64, 1.0);
    let g = DensityProfile::uniform(0.0f64, 0.5); // q(t) = 2 p(2t)
    let r = limit_scale_detect(&u, &v, &f, &g, 10_000, &AutocorrConfig::default()).unwrap();
    assert!(r.a_hat.status.established());
    assert!((r.a_value.unwrap() - 2.0).abs() < 1e-9);
    assert!(r.density_match < 1e-9, "residual {}", r.density_match);
}
