//! Dynamical criteria driven by the partial products.
//!
//! For a weight sequence `w` on `l_p`, every classification used here is a
//! statement about `L_n = ln |w_1 .. w_n|`:
//!
//! * hypercyclic  <=>  limsup L_n = +inf
//! * mixing       <=>  L_n -> +inf
//! * chaotic / frequently hypercyclic / admits a non-trivial invariant
//!   measure  <=>  `sum exp(-p L_n) < inf`
//!
//! Verdicts are three-valued; `Established`/`Refuted` cite either the
//! symbolic linear structure of the spec or an explicit numeric certificate.


use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::json;

use crate::cert::{certify_log_terms, CertConfig, SeriesCertificate, SeriesStatus, TailRule};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::verdict::{Rule, Status, Verdict};
use crate::weights::series::LogProductSeries;
use crate::weights::spec::WeightSpec;

/// Thresholds for the weight criteria.
#[derive(Clone, Copy, Debug)]
pub struct WeightsConfig {
    /// `L_n` beyond this value counts as a divergence crossing (it is also
    /// the overflow guard: exp(700) is near the f64 limit).
    pub divergence_log_threshold: f64,
    /// Series certification thresholds.
    pub cert: CertConfig,
    /// Structural log-slopes smaller than this snap to zero (inputs carry
    /// f64 precision, so slopes at rounding scale are noise).
    pub gamma_snap: f64,
}

impl Default for WeightsConfig {
    fn default() -> Self {
        WeightsConfig {
            divergence_log_threshold: 700.0,
            cert: CertConfig::default(),
            gamma_snap: 1e-12,
        }
    }
}

/// Default horizon for criteria when the caller does not pick one.
pub const DEFAULT_HORIZON: usize = 100_000;

/// Verdict on `S_p = sum_n 1/|w_1..w_n|^p`.
#[derive(Clone, Debug)]
pub struct SummabilityVerdict<T> {
    pub status: SeriesStatus,
    pub partial_sum: T,
    pub horizon: usize,
    pub tail_rule: TailRule,
    /// Certified bound on the remainder beyond the horizon, when convergent.
    pub tail_bound: Option<T>,
}

impl<T: Real> SummabilityVerdict<T> {
    fn from_certificate(c: SeriesCertificate<T>) -> Self {
        SummabilityVerdict {
            status: c.status,
            partial_sum: c.partial_sum,
            horizon: c.horizon,
            tail_rule: c.rule,
            tail_bound: c.tail_bound,
        }
    }
}

/// Decide `S_p` from a prebuilt series plus the spec's symbolic structure.
pub fn summability_from_series<T: Real>(
    spec: &WeightSpec,
    series: &LogProductSeries<T>,
    p: T,
    cfg: &WeightsConfig,
) -> SummabilityVerdict<T> {
    let horizon = series.horizon();
    let log_terms: Vec<T> = (1..=horizon).map(|n| -p * series.log(n)).collect();
    let partial_sum: T = log_terms.iter().map(|l| l.exp()).sum();

    if let Some(ts) = spec.tail_structure() {
        let gamma = if ts.gamma.abs() <= cfg.gamma_snap { 0.0 } else { ts.gamma };
        let pf = p.as_f64();
        if gamma > 0.0 {
            let q = (-pf * gamma).exp();
            let scale = (pf * ts.rho_bound).exp();
            let tail = T::of(scale) * T::of(q).powi(horizon as i32 + 1) / (T::one() - T::of(q));
            return SummabilityVerdict {
                status: SeriesStatus::Converges,
                partial_sum,
                horizon,
                tail_rule: TailRule::SymbolicGeometric { q, scale },
                tail_bound: Some(tail),
            };
        }
        // gamma <= 0: terms exp(-p L_n) >= exp(-p rho) > 0 forever
        let floor = (-pf * ts.rho_bound).exp();
        return SummabilityVerdict {
            status: SeriesStatus::Diverges,
            partial_sum,
            horizon,
            tail_rule: TailRule::TermsDoNotVanish { floor },
            tail_bound: None,
        };
    }

    SummabilityVerdict::from_certificate(certify_log_terms(&log_terms, &cfg.cert))
}

/// Decide `S_p` at the given horizon.
pub fn summability<T: Real>(
    spec: &WeightSpec,
    p: T,
    horizon: usize,
    cfg: &WeightsConfig,
) -> Result<SummabilityVerdict<T>> {
    let series = LogProductSeries::build(spec, horizon)?;
    Ok(summability_from_series(spec, &series, p, cfg))
}

/// The four-way dynamical classification of a weighted shift.
#[derive(Clone, Debug)]
pub struct Classification {
    pub hypercyclic: Verdict,
    pub mixing: Verdict,
    pub chaotic_fhc: Verdict,
    pub has_nontrivial_invariant_measure: Verdict,
}

/// Classify the shift at the given `p` and horizon.
pub fn classify<T: Real>(
    spec: &WeightSpec,
    p: T,
    horizon: usize,
    cfg: &WeightsConfig,
) -> Result<Classification> {
    let series = LogProductSeries::build(spec, horizon)?;
    let summ = summability_from_series(spec, &series, p, cfg);

    let summ_rule = match summ.tail_rule {
        TailRule::SymbolicGeometric { .. } => Rule::SymbolicLinearGrowth,
        TailRule::BlockDecay { .. } | TailRule::BlocksSustained { .. } => Rule::BlockDecay,
        TailRule::TermsDoNotVanish { .. } => Rule::TermsDoNotVanish,
        _ => Rule::GeometricDomination,
    };
    let summ_status = match summ.status {
        SeriesStatus::Converges => Status::Established,
        SeriesStatus::Diverges => Status::Refuted,
        SeriesStatus::Undecided => Status::Undecided,
    };
    let summ_evidence = json!({
        "partial_sum": summ.partial_sum.as_f64(),
        "horizon": summ.horizon,
        "tail_rule": serde_json::to_value(summ.tail_rule).unwrap_or(serde_json::Value::Null),
    });
    let chaotic = Verdict::new(summ_status, summ_rule, summ_evidence.clone());

    let thr = T::of(cfg.divergence_log_threshold);
    let snapped_gamma = spec.tail_structure().map(|ts| {
        if ts.gamma.abs() <= cfg.gamma_snap {
            (0.0, ts.rho_bound)
        } else {
            (ts.gamma, ts.rho_bound)
        }
    });

    // mixing: L_n -> +inf
    let mut mixing = match snapped_gamma {
        Some((gamma, rho)) if gamma > 0.0 => Verdict::established(
            Rule::SymbolicLinearGrowth,
            json!({"gamma": gamma, "rho_bound": rho}),
        ),
        Some((gamma, rho)) => Verdict::refuted(
            Rule::SymbolicLinearGrowth,
            json!({"gamma": gamma, "rho_bound": rho}),
        ),
        None => {
            let w_start = ((horizon as f64) * (1.0 - cfg.cert.window_frac)).floor() as usize;
            let window = &series.logs()[w_start.min(horizon)..];
            let w_min = window.iter().cloned().fold(T::infinity(), T::min);
            let w_max = window.iter().cloned().fold(T::neg_infinity(), T::max);
            if w_min >= thr {
                Verdict::established(
                    Rule::LogProductThreshold,
                    json!({"window_min": w_min.as_f64(), "threshold": cfg.divergence_log_threshold}),
                )
            } else if w_max <= -thr {
                Verdict::refuted(
                    Rule::LogProductThreshold,
                    json!({"window_max": w_max.as_f64(), "threshold": -cfg.divergence_log_threshold}),
                )
            } else {
                Verdict::undecided(Rule::LogProductThreshold, json!({"horizon": horizon}))
            }
        }
    };
    // chaotic => mixing (summable reciprocal products force L_n -> +inf)
    if chaotic.status.established() && !mixing.status.established() {
        mixing = Verdict::established(Rule::ImpliedByStronger, json!({"implied_by": "chaotic"}));
    }

    // hypercyclic: limsup L_n = +inf
    let mut hypercyclic = match snapped_gamma {
        Some((gamma, rho)) if gamma > 0.0 => Verdict::established(
            Rule::SymbolicLinearGrowth,
            json!({"gamma": gamma, "rho_bound": rho}),
        ),
        Some((gamma, rho)) => Verdict::refuted(
            Rule::SymbolicLinearGrowth,
            json!({"gamma": gamma, "rho_bound": rho, "limsup_bound": rho}),
        ),
        None => {
            let l_max = series.logs().iter().cloned().fold(T::neg_infinity(), T::max);
            if l_max >= thr {
                Verdict::established(
                    Rule::LogProductThreshold,
                    json!({"max_log_product": l_max.as_f64()}),
                )
            } else {
                Verdict::undecided(Rule::LogProductThreshold, json!({"horizon": horizon}))
            }
        }
    };
    if mixing.status.established() && !hypercyclic.status.established() {
        hypercyclic = Verdict::established(Rule::ImpliedByStronger, json!({"implied_by": "mixing"}));
    }

    Ok(Classification {
        hypercyclic,
        mixing,
        chaotic_fhc: chaotic.clone(),
        has_nontrivial_invariant_measure: chaotic,
    })
}

/// Truncated fixed point `x = e_0 + sum_n (w_1 .. w_n)^{-1} e_n` with a
/// certified tail bound.
#[derive(Clone, Debug)]
pub struct FixedPointVector<T> {
    /// Coordinates `0..=truncation`.
    pub coords: Vec<Complex<T>>,
    /// Exact rational coordinates when every weight is exactly rational.
    pub exact: Option<Vec<BigRational>>,
    /// Certified bound on `|| x - x_N ||_p`.
    pub tail_norm_bound: T,
    pub p: T,
}

/// Construct the truncated fixed point of the shift. Requires the reciprocal
/// product series to certify convergent at exponent `p`.
pub fn fixed_point<T: Real>(
    spec: &WeightSpec,
    p: T,
    truncation: usize,
    cfg: &WeightsConfig,
) -> Result<FixedPointVector<T>> {
    let horizon = truncation.max(1024);
    let series = LogProductSeries::build(spec, horizon)?;
    let summ = summability_from_series(spec, &series, p, cfg);
    if summ.status != SeriesStatus::Converges {
        return Err(Error::NotSummable(match summ.status {
            SeriesStatus::Diverges => "Diverges",
            _ => "Undecided",
        }));
    }

    let exact = exact_reciprocal_products(spec, truncation);
    let mut coords = Vec::with_capacity(truncation + 1);
    match &exact {
        // rational path: round the exact coordinate (dyadic values come out
        // bit-exact, e.g. 1/8 instead of exp(-3 ln 2))
        Some(recips) => {
            for r in recips {
                coords.push(Complex::new(T::of(r.to_f64().unwrap_or(f64::NAN)), T::zero()));
            }
        }
        None => {
            coords.push(Complex::new(T::one(), T::zero()));
            for n in 1..=truncation {
                let unit = series.unit(n);
                coords.push(unit.conj() * (-series.log(n)).exp());
            }
        }
    }

    // || x - x_N ||_p^p = sum_{n > N} exp(-p L_n)
    //                   = [partial over (N, horizon]] + certified tail
    let mut beyond: T = T::zero();
    for n in (truncation + 1)..=horizon {
        beyond += (-p * series.log(n)).exp();
    }
    beyond += summ.tail_bound.unwrap_or(T::zero());
    let tail_norm_bound = beyond.powf(T::one() / p);

    Ok(FixedPointVector { coords, exact, tail_norm_bound, p })
}

/// `[1, 1/w_1, 1/(w_1 w_2), ...]` exactly, when the spec evaluates rationally.
pub fn exact_reciprocal_products(spec: &WeightSpec, truncation: usize) -> Option<Vec<BigRational>> {
    let mut out = Vec::with_capacity(truncation + 1);
    let mut prod = BigRational::one();
    out.push(prod.clone());
    for n in 1..=truncation {
        let w = spec.eval(n).ok()?;
        let r = w.exact()?;
        prod /= r;
        out.push(prod.clone());
    }
    Some(out)
}

/// One exact application of the shift to a finite rational vector:
/// `(B_w x)_j = w_{j+1} x_{j+1}` (the result is one entry shorter).
pub fn shift_exact(spec: &WeightSpec, coords: &[BigRational]) -> Option<Vec<BigRational>> {
    if coords.is_empty() {
        return Some(Vec::new());
    }
    let mut out = Vec::with_capacity(coords.len() - 1);
    for j in 0..coords.len() - 1 {
        let w = spec.eval(j + 1).ok()?;
        let r = w.exact()?.clone();
        out.push(&coords[j + 1] * r);
    }
    Some(out)
}

/// Verify the hypotheses of the orbit-based summability certificate on
/// concrete data: a vector whose orbit stays bounded (`C1`), keeps its first
/// coordinate away from zero (`C2`) along a time set of positive upper
/// density. When they hold, the reciprocal product series is forced to
/// converge; the verdict cross-checks that against the independent
/// certification and flags a contradiction if the two disagree.
pub fn summability_certificate_check<T: Real>(
    x: &[Complex<T>],
    n_set: &[usize],
    spec: &WeightSpec,
    p: T,
    bounds: (T, T),
    horizon: usize,
    cfg: &WeightsConfig,
) -> Result<Verdict> {
    if n_set.is_empty() {
        return Err(Error::EmptyWitnessSet);
    }
    let (c1, c2) = bounds;
    if c2 <= T::zero() {
        return Err(Error::ZeroScalar);
    }
    let max_n = *n_set.iter().max().unwrap();
    let series = LogProductSeries::build(spec, (x.len() + max_n).max(horizon))?;

    let mut sup_norm = T::zero();
    let mut inf_coord0 = T::infinity();
    for &n in n_set {
        let y = apply_shift_power(&series, x, n);
        let norm = lp_norm(&y, p);
        sup_norm = sup_norm.max(norm);
        let coord0 = y.first().map_or(T::zero(), |z| z.norm());
        inf_coord0 = inf_coord0.min(coord0);
    }

    // upper density estimate: max over dyadic prefixes of |N_set ∩ [0,N]| / (N+1)
    let mut sorted = n_set.to_vec();
    sorted.sort_unstable();
    let mut density = 0.0f64;
    let mut prefix = 1usize;
    while prefix / 2 <= max_n {
        let count = sorted.partition_point(|&n| n < prefix);
        density = density.max(count as f64 / prefix as f64);
        prefix *= 2;
    }

    let hypotheses_hold = sup_norm <= c1 && inf_coord0 >= c2 && density > 0.0;
    let summ = summability_from_series(spec, &series, p, cfg);
    let evidence = json!({
        "sup_orbit_norm": sup_norm.as_f64(),
        "inf_coord0": inf_coord0.as_f64(),
        "upper_density_estimate": density,
        "hypotheses_hold": hypotheses_hold,
        "series_status": format!("{:?}", summ.status),
        "contradiction": hypotheses_hold && summ.status == SeriesStatus::Diverges,
    });
    Ok(if !hypotheses_hold {
        Verdict::undecided(Rule::OrbitCertificate, evidence)
    } else {
        match summ.status {
            SeriesStatus::Converges => Verdict::established(Rule::OrbitCertificate, evidence),
            SeriesStatus::Diverges => Verdict::refuted(Rule::OrbitCertificate, evidence),
            SeriesStatus::Undecided => Verdict::undecided(Rule::OrbitCertificate, evidence),
        }
    })
}

/// `(B_w^n x)_j = (w_{j+1} .. w_{j+n}) x_{j+n}`, evaluated through the log
/// cache so long products never overflow.
pub fn apply_shift_power<T: Real>(
    series: &LogProductSeries<T>,
    x: &[Complex<T>],
    n: usize,
) -> Vec<Complex<T>> {
    if n >= x.len() {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(x.len() - n);
    for j in 0..x.len() - n {
        let factor = series.segment_product(j, j + n);
        out.push(factor * x[j + n]);
    }
    out
}

/// lp norm of a finite complex vector.
pub fn lp_norm<T: Real>(x: &[Complex<T>], p: T) -> T {
    if x.is_empty() {
        return T::zero();
    }
    let sum: T = x.iter().map(|z| z.norm().powf(p)).sum();
    sum.powf(T::one() / p)
}
