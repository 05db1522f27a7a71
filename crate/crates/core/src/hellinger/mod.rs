//! Marginal overlap integrals and the product-measure dichotomy.
//!
//! The overlap (Hellinger) integral of two laws `alpha`, `beta` on the scalar
//! field is `H(alpha, beta) = int sqrt(d alpha / d tau) sqrt(d beta / d tau)
//! d tau`; it lies in `[0, 1]`, equals 1 iff the laws coincide and 0 iff they
//! are mutually singular. For two product measures the dichotomy holds: they
//! are non-orthogonal iff `prod_n H(mu_n, nu_n) > 0`, and when all marginal
//! pairs are mutually absolutely continuous they are either equivalent or
//! orthogonal. Convergence of the deficit series `sum (1 - H_n)` is decided
//! by the certification rules from [`crate::cert`].
//!
//! For Gaussian marginals everything is closed-form: with scale ratio
//! `lambda_n` the overlap is `(2 lambda_n / (1 + lambda_n^2))^{d/2}`, and the
//! deficit behaves like `(d/4)(1 - lambda_n)^2` near `lambda = 1`, which is
//! what reduces equivalence of invariant Gaussian product measures to the
//! square-summability of `1 - kappa |u_1..u_n| / |v_1..v_n|`.


use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::json;

use crate::cert::{
    certify_terms, detect_log_limit, CertConfig, LimitDetection, SeriesCertificate, SeriesStatus,
};
use crate::error::{Error, Result};
use crate::measures::{InvariantProductMeasure, MarginalMeasure, SampleReal};
use crate::quad::{integrate, QuadConfig};
use crate::real::{ln_balance_from_log, Real};
use crate::scalar::SpecScalar;
use crate::verdict::{Rule, Verdict};
use crate::weights::{
    summability_from_series, Field, LogProductSeries, WeightSpec, WeightsConfig,
};

/// Thresholds for the overlap computations.
#[derive(Clone, Copy, Debug)]
pub struct HellingerConfig {
    pub quad: QuadConfig,
    pub cert: CertConfig,
    /// Stability tolerance for the fitted scale (tail extrapolants must agree
    /// within `kappa_stab_tol * (1 + |value|)`).
    pub kappa_stab_tol: f64,
    /// Log-ratio magnitude treated as divergence to 0 or infinity.
    pub divergence_guard: f64,
    pub weights: WeightsConfig,
}

impl Default for HellingerConfig {
    fn default() -> Self {
        HellingerConfig {
            quad: QuadConfig::default(),
            cert: CertConfig::default(),
            kappa_stab_tol: 1e-6,
            divergence_guard: 700.0,
            weights: WeightsConfig::default(),
        }
    }
}

/// Overlap integral of two marginals, dispatching to closed forms where they
/// exist and to adaptive quadrature otherwise. Purely discrete against purely
/// continuous is exactly 0; a mixed pair decomposes additively, and with the
/// four closed families each law is purely one or the other, so no cross term
/// survives.
pub fn hellinger<T: Real>(
    alpha: &MarginalMeasure<T>,
    beta: &MarginalMeasure<T>,
    cfg: &QuadConfig,
) -> Result<T> {
    use MarginalMeasure::*;
    let value = match (alpha, beta) {
        (Gaussian { sigma: s1, field: f1 }, Gaussian { sigma: s2, field: f2 }) => {
            if f1 != f2 {
                return Err(Error::UnsupportedKind("Gaussian fields differ"));
            }
            gaussian_overlap(*s1, *s2, f1.dim())
        }
        (DiscreteGroup { support: s1, weights: w1 }, DiscreteGroup { support: s2, weights: w2 }) => {
            discrete_overlap(s1, w1, s2, w2)
        }
        (DiscreteGroup { .. }, _) | (_, DiscreteGroup { .. }) => T::zero(),
        (UniformInterval { a: a1, b: b1 }, UniformInterval { a: a2, b: b2 }) => {
            let lo = a1.max(*a2);
            let hi = b1.min(*b2);
            let overlap = (hi - lo).max(T::zero());
            overlap / ((*b1 - *a1) * (*b2 - *a2)).sqrt()
        }
        _ => {
            if alpha.field_dim() != 1 || beta.field_dim() != 1 {
                return Err(Error::UnsupportedKind(
                    "complex Gaussian cannot pair with a real-line density",
                ));
            }
            continuous_overlap_quadrature(alpha, beta, cfg)?
        }
    };
    Ok(clamp_unit(value))
}

/// Overlap of two marginals forced through the quadrature route (the
/// independent cross-check of the closed forms, including both Gaussian
/// field dimensions).
pub fn hellinger_quadrature<T: Real>(
    alpha: &MarginalMeasure<T>,
    beta: &MarginalMeasure<T>,
    cfg: &QuadConfig,
) -> Result<T> {
    use MarginalMeasure::*;
    match (alpha, beta) {
        (Gaussian { sigma: s1, field: Field::Complex }, Gaussian { sigma: s2, field: Field::Complex }) => {
            // rotation-invariant densities: integrate radially,
            // H = int_0^inf 2 pi r sqrt(p(r) q(r)) dr
            let (s1, s2) = (*s1, *s2);
            let r_max = s1.max(s2) * T::of(12.0);
            let two_pi = T::PI() + T::PI();
            let f = move |r: T| {
                let p = (-(r * r) / (T::of(2.0) * s1 * s1)).exp() / (two_pi * s1 * s1);
                let q = (-(r * r) / (T::of(2.0) * s2 * s2)).exp() / (two_pi * s2 * s2);
                two_pi * r * (p * q).sqrt()
            };
            let v = integrate(f, T::zero(), r_max, &[], cfg)?;
            Ok(clamp_unit(v))
        }
        (Gaussian { field: Field::Complex, .. }, _) | (_, Gaussian { field: Field::Complex, .. }) => {
            Err(Error::UnsupportedKind("complex Gaussian pairs only with complex Gaussian"))
        }
        (DiscreteGroup { .. }, _) | (_, DiscreteGroup { .. }) => hellinger(alpha, beta, cfg),
        _ => Ok(clamp_unit(continuous_overlap_quadrature(alpha, beta, cfg)?)),
    }
}

fn clamp_unit<T: Real>(v: T) -> T {
    v.max(T::zero()).min(T::one())
}

/// Closed-form Gaussian overlap `(2 s1 s2 / (s1^2 + s2^2))^{d/2}`.
pub fn gaussian_overlap<T: Real>(s1: T, s2: T, dim: usize) -> T {
    let ratio_log = s2.ln() - s1.ln();
    ((T::of_usize(dim) / T::of(2.0)) * ln_balance_from_log(ratio_log)).exp()
}

fn discrete_overlap<T: Real>(s1: &[T], w1: &[T], s2: &[T], w2: &[T]) -> T {
    let mut p1: Vec<(T, T)> = s1.iter().cloned().zip(w1.iter().cloned()).collect();
    let mut p2: Vec<(T, T)> = s2.iter().cloned().zip(w2.iter().cloned()).collect();
    let by_point =
        |a: &(T, T), b: &(T, T)| a.0.partial_cmp(&b.0).expect("finite support points");
    p1.sort_by(by_point);
    p2.sort_by(by_point);
    let close = |a: T, b: T| (a - b).abs() <= T::of(1e-12) * (T::one() + a.abs().max(b.abs()));
    let (mut i, mut j) = (0usize, 0usize);
    let mut acc = T::zero();
    while i < p1.len() && j < p2.len() {
        if close(p1[i].0, p2[j].0) {
            acc += (p1[i].1 * p2[j].1).sqrt();
            i += 1;
            j += 1;
        } else if p1[i].0 < p2[j].0 {
            i += 1;
        } else {
            j += 1;
        }
    }
    acc
}

fn continuous_overlap_quadrature<T: Real>(
    alpha: &MarginalMeasure<T>,
    beta: &MarginalMeasure<T>,
    cfg: &QuadConfig,
) -> Result<T> {
    let (a_lo, a_hi) = alpha.support_bounds();
    let (b_lo, b_hi) = beta.support_bounds();
    let lo = a_lo.max(b_lo);
    let hi = a_hi.min(b_hi);
    if hi <= lo {
        return Ok(T::zero());
    }
    let mut breaks = alpha.breakpoints();
    breaks.extend(beta.breakpoints());
    let fa = |t: T| alpha.density(t).unwrap_or(T::zero());
    let fb = |t: T| beta.density(t).unwrap_or(T::zero());
    integrate(move |t| (fa(t) * fb(t)).sqrt(), lo, hi, &breaks, cfg)
}

/// Verdict of the product-measure dichotomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DichotomyVerdict {
    /// Marginal overlap deficit summable and all marginal pairs mutually
    /// absolutely continuous.
    Equivalent,
    /// Overlap product certified to vanish.
    Orthogonal,
    /// Overlap product certified positive, equivalence not claimed at the
    /// kind level.
    NonOrthogonal,
    Undecided,
}

/// Per-marginal overlaps of two product measures with the certified verdict.
#[derive(Clone, Debug, Serialize)]
pub struct HellingerReport<T> {
    /// `H_n = H(mu_{u,n}, mu_{v,n})` for `n = 0..=horizon`.
    pub per_n: Vec<T>,
    /// `sum_n (1 - H_n)` over the computed range.
    pub deficit_sum: T,
    pub verdict: DichotomyVerdict,
    /// Detected limit of the overlap-driving scale ratio, when stable
    /// (Gaussian marginals only).
    pub kappa_hat: Option<T>,
    /// Certificate for the deficit series.
    pub deficit_certificate: SeriesCertificate<T>,
}

/// Decide the dichotomy for two invariant product measures.
pub fn kakutani_decide<T: Real>(
    m_u: &InvariantProductMeasure<T>,
    m_v: &InvariantProductMeasure<T>,
    horizon: usize,
    cfg: &HellingerConfig,
) -> Result<HellingerReport<T>> {
    let n_max = horizon.min(m_u.horizon()).min(m_v.horizon());
    let mu0_u = m_u.mu0();
    let mu0_v = m_v.mu0();

    let gaussian_pair = match (mu0_u, mu0_v) {
        (
            MarginalMeasure::Gaussian { sigma: su, field: fu },
            MarginalMeasure::Gaussian { sigma: sv, field: fv },
        ) if fu == fv => Some((*su, *sv, fu.dim())),
        _ => None,
    };

    let mut per_n: Vec<T> = Vec::with_capacity(n_max + 1);
    let mut lambda_logs: Vec<T> = Vec::with_capacity(n_max);
    if let Some((su, sv, dim)) = gaussian_pair {
        let d_half = T::of_usize(dim) / T::of(2.0);
        let sigma_ratio_log = sv.ln() - su.ln();
        for n in 0..=n_max {
            // lambda_n = (sigma_v / sigma_u) |u_1..u_n| / |v_1..v_n|
            let llog = sigma_ratio_log
                + (m_u.series().log(n) - m_v.series().log(n));
            if n >= 1 {
                lambda_logs.push(llog);
            }
            per_n.push((d_half * ln_balance_from_log(llog)).exp());
        }
    } else {
        // the overlap is scale-invariant, so compare mu0_u scaled by the
        // ratio exp(-(L^u_n - L^v_n)) against mu0_v directly; both absolute
        // scales exp(-L_n) underflow to zero near horizon 10^3, the ratio
        // stays representable unless the pair genuinely drifts apart
        for n in 0..=n_max {
            let llog = m_u.series().log(n) - m_v.series().log(n);
            let h = if llog.abs() > T::of(cfg.divergence_guard) {
                T::zero()
            } else {
                hellinger(&mu0_u.scaled((-llog).exp()), mu0_v, &cfg.quad)?
            };
            per_n.push(h);
        }
    }

    let deficits: Vec<T> = per_n.iter().map(|h| (T::one() - *h).max(T::zero())).collect();
    let deficit_sum: T = deficits.iter().cloned().sum();
    let cert = certify_terms(&deficits[1..], &cfg.cert);

    let kappa_hat = if lambda_logs.is_empty() {
        None
    } else {
        match detect_log_limit(&lambda_logs, cfg.kappa_stab_tol, cfg.divergence_guard) {
            LimitDetection::Limit(l) => Some(l),
            _ => None,
        }
    };

    // an exactly vanishing marginal overlap collapses the whole product
    let verdict = if per_n.iter().any(|h| *h == T::zero()) {
        DichotomyVerdict::Orthogonal
    } else {
        match cert.status {
            SeriesStatus::Diverges => DichotomyVerdict::Orthogonal,
            SeriesStatus::Converges => {
                if mu0_u.mutually_ac_with(mu0_v) {
                    DichotomyVerdict::Equivalent
                } else {
                    DichotomyVerdict::NonOrthogonal
                }
            }
            SeriesStatus::Undecided => DichotomyVerdict::Undecided,
        }
    };

    Ok(HellingerReport { per_n, deficit_sum, verdict, kappa_hat, deficit_certificate: cert })
}

/// Result of the Gaussian-equivalence decision.
#[derive(Clone, Debug)]
pub struct GaussianEquivalence<T> {
    /// Established iff some `kappa > 0` makes
    /// `sum (1 - kappa |u_1..u_n|/|v_1..v_n|)^2` converge; the witnesses are
    /// then the invariant Gaussian product measures with `sigma = 1`,
    /// `sigma' = kappa`.
    pub exists_kappa: Verdict,
    pub kappa_hat: Option<T>,
    pub deficit: Option<SeriesCertificate<T>>,
}

/// Decide whether the two shifts admit equivalent invariant Gaussian product
/// measures. Requires both reciprocal product series summable at `p`.
pub fn gaussian_equivalence_test<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    p: T,
    horizon: usize,
    cfg: &HellingerConfig,
) -> Result<GaussianEquivalence<T>> {
    let su: LogProductSeries<T> = LogProductSeries::build(u, horizon)?;
    let sv: LogProductSeries<T> = LogProductSeries::build(v, horizon)?;
    let summ_u = summability_from_series(u, &su, p, &cfg.weights);
    if summ_u.status != SeriesStatus::Converges {
        return Err(Error::NotSummable("u series not certified convergent"));
    }
    let summ_v = summability_from_series(v, &sv, p, &cfg.weights);
    if summ_v.status != SeriesStatus::Converges {
        return Err(Error::NotSummable("v series not certified convergent"));
    }
    gaussian_equivalence_from_series(u, v, &su, &sv, cfg)
}

/// Same decision from prebuilt series (summability is the caller's problem).
pub fn gaussian_equivalence_from_series<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    su: &LogProductSeries<T>,
    sv: &LogProductSeries<T>,
    cfg: &HellingerConfig,
) -> Result<GaussianEquivalence<T>> {
    // symbolic shortcut: a non-zero structural slope sends |lambda_n| to 0 or
    // infinity, where no kappa can work
    if let Some((slope, _)) = u.ratio_structure(v) {
        let slope = if slope.abs() <= cfg.weights.gamma_snap { 0.0 } else { slope };
        if slope != 0.0 {
            return Ok(GaussianEquivalence {
                exists_kappa: Verdict::refuted(
                    Rule::GaussianEquivalence,
                    json!({"symbolic": true, "log_slope_per_index": slope}),
                ),
                kappa_hat: None,
                deficit: None,
            });
        }
    }

    let n_max = su.horizon().min(sv.horizon());
    let lambda_logs: Vec<T> = (1..=n_max).map(|n| su.log(n) - sv.log(n)).collect();
    match detect_log_limit(&lambda_logs, cfg.kappa_stab_tol, cfg.divergence_guard) {
        LimitDetection::Diverged { last } => Ok(GaussianEquivalence {
            exists_kappa: Verdict::refuted(
                Rule::GaussianEquivalence,
                json!({"lambda_log_last": last.as_f64(),
                        "reason": "ratio escapes to 0 or infinity"}),
            ),
            kappa_hat: None,
            deficit: None,
        }),
        LimitDetection::Unresolved => Ok(GaussianEquivalence {
            exists_kappa: Verdict::undecided(
                Rule::GaussianEquivalence,
                json!({"horizon": n_max, "reason": "ratio tail did not stabilize"}),
            ),
            kappa_hat: None,
            deficit: None,
        }),
        LimitDetection::Limit(limit) => {
            let kappa = T::one() / limit;
            let deficit_terms: Vec<T> = lambda_logs
                .iter()
                .map(|l| {
                    let x = T::one() - kappa * l.exp();
                    x * x
                })
                .collect();
            let cert = certify_terms(&deficit_terms, &cfg.cert);
            let evidence = json!({
                "kappa_hat": kappa.as_f64(),
                "deficit_partial_sum": cert.partial_sum.as_f64(),
                "deficit_rule": serde_json::to_value(cert.rule).unwrap_or(serde_json::Value::Null),
                "witness_sigmas": [1.0, kappa.as_f64()],
            });
            let exists_kappa = match cert.status {
                SeriesStatus::Converges => Verdict::established(Rule::GaussianEquivalence, evidence),
                // any admissible kappa forces lambda_n -> 1/kappa; the tail
                // pins the only candidate, and at that candidate the series
                // diverges
                SeriesStatus::Diverges => Verdict::refuted(Rule::GaussianEquivalence, evidence),
                SeriesStatus::Undecided => Verdict::undecided(Rule::GaussianEquivalence, evidence),
            };
            Ok(GaussianEquivalence { exists_kappa, kappa_hat: Some(kappa), deficit: Some(cert) })
        }
    }
}

/// Decide non-orthogonality with respect to product measures with purely
/// discrete marginals: possible iff the product ratio is eventually constant,
/// in which case the equivalent pair is constructed by rescaling the base
/// density (`q(s) = p(lambda s)`).
pub fn discrete_marginal_test<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    mu0_u: &MarginalMeasure<T>,
    mu0_v: &MarginalMeasure<T>,
    horizon: usize,
) -> Result<Verdict> {
    let (support_p, weights_p) = match mu0_u {
        MarginalMeasure::DiscreteGroup { support, weights } => (support, weights),
        _ => return Err(Error::ConfigError("mu0_u must be a discrete marginal".into())),
    };
    mu0_u.validate()?;
    mu0_v.validate()?;
    if !matches!(mu0_v, MarginalMeasure::DiscreteGroup { .. }) {
        return Err(Error::ConfigError("mu0_v must be a discrete marginal".into()));
    }

    // symbolic tails decide constancy of the ratio beyond the prefix
    let tail_u = eventually_constant_tail(u);
    let tail_v = eventually_constant_tail(v);
    let (decision, lambda_const) = match (tail_u, tail_v) {
        (Some((tu, nu)), Some((tv, nv))) => {
            let n0 = nu.max(nv);
            if tu == tv {
                // ratio frozen from n0 on; evaluate it there
                let su: LogProductSeries<T> = LogProductSeries::build(u, n0)?;
                let sv: LogProductSeries<T> = LogProductSeries::build(v, n0)?;
                let llog = su.log(n0) - sv.log(n0);
                (Some(true), Some((llog.exp(), n0)))
            } else if (tu.modulus_f64() - tv.modulus_f64()).abs()
                > 1e-12 * (1.0 + tu.modulus_f64())
            {
                (Some(false), None)
            } else {
                (None, None)
            }
        }
        _ => (None, None),
    };

    match decision {
        Some(true) => {
            let (lambda, from_n) = lambda_const.unwrap();
            // q(s) := p(lambda s): mass p_i moves to the point s_i / lambda
            let constructed_support: Vec<T> =
                support_p.iter().map(|s| *s / lambda).collect();
            let constructed = MarginalMeasure::discrete(
                constructed_support.clone(),
                weights_p.clone(),
            );
            let matches_given = &constructed == mu0_v;
            Ok(Verdict::established(
                Rule::DiscreteRatioConstancy,
                json!({
                    "lambda": lambda.as_f64(),
                    "constant_from": from_n,
                    "constructed_support": constructed_support.iter().map(|s| s.as_f64()).collect::<Vec<_>>(),
                    "constructed_weights": weights_p.iter().map(|w| w.as_f64()).collect::<Vec<_>>(),
                    "given_mu0_v_matches": matches_given,
                }),
            ))
        }
        Some(false) => Ok(Verdict::refuted(
            Rule::DiscreteRatioConstancy,
            json!({"reason": "tail weight moduli differ: ratio drifts geometrically"}),
        )),
        None => {
            // no symbolic tail rule; report what the horizon shows
            let su: LogProductSeries<T> = LogProductSeries::build(u, horizon)?;
            let sv: LogProductSeries<T> = LogProductSeries::build(v, horizon)?;
            let mut last_change = 0usize;
            for n in 1..horizon {
                let a = su.log(n) - sv.log(n);
                let b = su.log(n + 1) - sv.log(n + 1);
                if (a - b).abs() > T::of(1e-12) {
                    last_change = n + 1;
                }
            }
            Ok(Verdict::undecided(
                Rule::DiscreteRatioConstancy,
                json!({"observed_constant_from": last_change, "horizon": horizon,
                        "reason": "no symbolic tail rule for the pair"}),
            ))
        }
    }
}

/// Tail value of an eventually constant weight sequence, with the index it
/// starts from.
fn eventually_constant_tail(spec: &WeightSpec) -> Option<(SpecScalar, usize)> {
    use crate::weights::{EpsilonSeq, ExceptionGen, WeightKind};
    match &spec.kind {
        WeightKind::Constant { value } => Some((value.clone(), 1)),
        WeightKind::Scaled { factor, base } => {
            let (tail, from) = eventually_constant_tail(base)?;
            Some((factor.mul(&tail), from))
        }
        WeightKind::Prefix { prefix, tail } => Some((tail.clone(), prefix.len() + 1)),
        WeightKind::Sparse { base, exceptions } => match exceptions {
            ExceptionGen::List { pairs } => {
                let from = pairs.last().map_or(1, |(pos, _)| pos + 1);
                Some((base.clone(), from))
            }
            ExceptionGen::Formula { .. } => None,
        },
        WeightKind::Ratio { base, epsilons } => match epsilons {
            EpsilonSeq::Zero => Some((base.clone(), 1)),
            _ => None,
        },
    }
}

/// The log-translate sequence of a shift pair at scale `a`:
/// `alpha_n = ln |u_1..u_n| - ln |v_1..v_n| - ln a` for `n >= 1` (with
/// `alpha_0 = 0` for the empty products). Mapping both product measures
/// through coordinatewise `log | . |` turns their scale mismatch into a
/// translation by exactly this sequence, which is what [`translate_test`]
/// examines.
pub fn log_translate_sequence<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    a: T,
    horizon: usize,
) -> Result<Vec<T>> {
    if a <= T::zero() {
        return Err(Error::ZeroScalar);
    }
    let su: LogProductSeries<T> = LogProductSeries::build(u, horizon)?;
    let sv: LogProductSeries<T> = LogProductSeries::build(v, horizon)?;
    let ln_a = a.ln();
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(T::zero());
    for n in 1..=horizon {
        out.push(su.log(n) - sv.log(n) - ln_a);
    }
    Ok(out)
}

/// Necessary-condition test on the log-translate sequence: orthogonality is
/// established when the relevant centered square series diverges; convergence
/// decides nothing (the criterion is only necessary).
pub fn translate_test<T: Real>(
    alphas: &[T],
    has_second_moment: bool,
    cfg: &HellingerConfig,
) -> Verdict {
    if alphas.is_empty() {
        return Verdict::undecided(Rule::TranslateSquareSummability, json!({"terms": 0}));
    }
    let center = if has_second_moment {
        let start = (alphas.len() as f64 * 0.75) as usize;
        let tail = &alphas[start.min(alphas.len() - 1)..];
        tail.iter().cloned().sum::<T>() / T::of_usize(tail.len())
    } else {
        T::zero()
    };
    let terms: Vec<T> = alphas.iter().map(|a| (*a - center) * (*a - center)).collect();
    let cert = certify_terms(&terms, &cfg.cert);
    let evidence = json!({
        "centered": has_second_moment,
        "alpha_hat": center.as_f64(),
        "partial_sum": cert.partial_sum.as_f64(),
        "series_status": format!("{:?}", cert.status),
    });
    match cert.status {
        SeriesStatus::Diverges => Verdict::established(Rule::TranslateSquareSummability, evidence),
        _ => Verdict::undecided(Rule::TranslateSquareSummability, evidence),
    }
}

/// Executable orthogonality certificate from the dichotomy proof: the set
/// `E = { F_N >= 1 }` built from the product of square-root density ratios
/// has small mass under one measure while its complement is small under the
/// other.
#[derive(Clone, Debug, Serialize)]
pub struct KakutaniWitness<T> {
    /// Index cutoff `N` actually used.
    pub n_used: usize,
    /// `prod_{n <= N} H_n` at that cutoff (below `epsilon` by construction).
    pub product_at_n: T,
    pub epsilon: T,
    /// Monte Carlo estimate of `mu_v(F_N >= 1)`.
    pub est_mu_v_of_e: T,
    /// Monte Carlo estimate of `mu_u(F_N < 1)`.
    pub est_mu_u_of_complement: T,
    pub se_v: T,
    pub se_u: T,
    /// Human-readable description of the witness set.
    pub e_descriptor: String,
}

/// Build and Monte Carlo-check the witness set. Marginals must be mutually
/// absolutely continuous with computable densities (Gaussian pairs).
pub fn kakutani_witness<T: SampleReal>(
    m_u: &InvariantProductMeasure<T>,
    m_v: &InvariantProductMeasure<T>,
    n_opt: Option<usize>,
    epsilon: T,
    mc_samples: usize,
    seed: u64,
) -> Result<KakutaniWitness<T>>
where
    StandardNormal: Distribution<T>,
{
    let (sigma_u, sigma_v, dim) = match (m_u.mu0(), m_v.mu0()) {
        (
            MarginalMeasure::Gaussian { sigma: su, field: fu },
            MarginalMeasure::Gaussian { sigma: sv, field: fv },
        ) if fu == fv => (*su, *sv, fu.dim()),
        _ => return Err(Error::NoDensity),
    };
    let cap = m_u.horizon().min(m_v.horizon()).min(4000);
    let d_half = T::of_usize(dim) / T::of(2.0);
    let sigma_ratio_log = sigma_v.ln() - sigma_u.ln();

    // running product of marginal overlaps until it undercuts epsilon
    let mut log_product = T::zero();
    let mut n_used = None;
    let mut reached = T::one();
    for n in 0..=cap {
        let llog = sigma_ratio_log + (m_u.series().log(n) - m_v.series().log(n));
        log_product += d_half * ln_balance_from_log(llog);
        reached = log_product.exp();
        if let Some(want) = n_opt {
            if n == want {
                if reached >= epsilon {
                    return Err(Error::InsufficientHorizon {
                        product: reached.as_f64(),
                        epsilon: epsilon.as_f64(),
                        at: n,
                    });
                }
                n_used = Some(n);
                break;
            }
        } else if reached < epsilon {
            n_used = Some(n);
            break;
        }
    }
    let n_used = n_used.ok_or(Error::InsufficientHorizon {
        product: reached.as_f64(),
        epsilon: epsilon.as_f64(),
        at: cap,
    })?;

    // ln sqrt(d mu_{u,n} / d mu_{v,n})(t) for the Gaussian marginals
    let ln_sigma_u: Vec<T> = (0..=n_used).map(|n| sigma_u.ln() - m_u.series().log(n)).collect();
    let ln_sigma_v: Vec<T> = (0..=n_used).map(|n| sigma_v.ln() - m_v.series().log(n)).collect();
    let half = T::of(0.5);
    let dimt = T::of_usize(dim);
    let log_f = |x: &[num_complex::Complex<T>]| -> T {
        let mut acc = T::zero();
        for n in 0..=n_used {
            let t2 = x[n].norm_sqr();
            let inv_u = (-(ln_sigma_u[n] + ln_sigma_u[n])).exp();
            let inv_v = (-(ln_sigma_v[n] + ln_sigma_v[n])).exp();
            let ln_ratio =
                dimt * (ln_sigma_v[n] - ln_sigma_u[n]) + half * t2 * (inv_v - inv_u);
            acc += half * ln_ratio;
        }
        acc
    };

    let samples_v = m_v.sample_many(mc_samples, n_used, seed)?;
    let hits_v = samples_v.iter().filter(|x| log_f(x) >= T::zero()).count();
    let est_v = T::of_usize(hits_v) / T::of_usize(mc_samples);

    let samples_u = m_u.sample_many(mc_samples, n_used, seed.wrapping_add(0x9e3779b9))?;
    let hits_u = samples_u.iter().filter(|x| log_f(x) < T::zero()).count();
    let est_u = T::of_usize(hits_u) / T::of_usize(mc_samples);

    Ok(KakutaniWitness {
        n_used,
        product_at_n: reached,
        epsilon,
        est_mu_v_of_e: est_v,
        est_mu_u_of_complement: est_u,
        se_v: crate::stats::bernoulli_std_error(est_v, mc_samples),
        se_u: crate::stats::bernoulli_std_error(est_u, mc_samples),
        e_descriptor: format!(
            "E = {{ prod_{{n<={n_used}}} sqrt(d mu_u_n / d mu_v_n)(x_n) >= 1 }}"
        ),
    })
}
