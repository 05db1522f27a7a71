//! Orbit simulation and empirical orthogonality witnesses.
//!
//! The n-th shift power acts coordinatewise through the cached log-products:
//! `(B_w^n x)_j = (w_{j+1} .. w_{j+n}) x_{j+n}`. On top of that sit visit
//! statistics (hit times of a region, with conservative truncation-aware
//! membership), the Monte Carlo estimate of the joint pullback mass
//! `q_n = P(B_u^n x in K and B_v^n x in K)` whose decay witnesses
//! orthogonality, and the supremum constant transferring frequent
//! hypercyclicity between shifts with convergent product ratio.

use num_complex::Complex;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::json;

use crate::cert::{detect_log_limit, LimitDetection};
use crate::error::{Error, Result};
use crate::measures::{InvariantProductMeasure, SampleReal};
use crate::real::Real;
use crate::verdict::{Rule, Verdict};
use crate::weights::{apply_shift_power, lp_norm, LogProductSeries, WeightSpec, WeightsConfig};

/// Monte Carlo defaults.
#[derive(Clone, Copy, Debug)]
pub struct OrbitConfig {
    pub mc_samples: usize,
    pub epsilon: f64,
    pub weights: WeightsConfig,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig { mc_samples: 10_000, epsilon: 0.1, weights: WeightsConfig::default() }
    }
}

/// A region of the sequence space used for visit statistics.
#[derive(Clone, Debug)]
pub enum Region<T> {
    /// `{ z : || z - center ||_p < radius }`.
    Ball { center: Vec<Complex<T>>, radius: T },
    /// `{ z : || z ||_p <= norm_max and |z_0| >= coord0_min }`.
    NormBandCoord0 { norm_max: T, coord0_min: T },
}

impl<T: Real> Region<T> {
    /// Conservative membership: the truncation slack is added to the distance
    /// (a hit is only counted when certain).
    pub fn contains(&self, x: &[Complex<T>], p: T, tail_slack: T) -> bool {
        match self {
            Region::Ball { center, radius } => {
                let mut acc = T::zero();
                let m = center.len().max(x.len());
                for j in 0..m {
                    let xi = x.get(j).cloned().unwrap_or_else(|| Complex::new(T::zero(), T::zero()));
                    let ci = center
                        .get(j)
                        .cloned()
                        .unwrap_or_else(|| Complex::new(T::zero(), T::zero()));
                    acc += (xi - ci).norm().powf(p);
                }
                acc.powf(T::one() / p) + tail_slack < *radius
            }
            Region::NormBandCoord0 { norm_max, coord0_min } => {
                let norm = lp_norm(x, p);
                let coord0 = x.first().map_or(T::zero(), |z| z.norm());
                norm + tail_slack <= *norm_max && coord0 >= *coord0_min
            }
        }
    }

    /// Whether the closure of the region excludes the origin.
    pub fn excludes_zero(&self, p: T) -> bool {
        match self {
            Region::Ball { center, radius } => lp_norm(center, p) > *radius,
            Region::NormBandCoord0 { coord0_min, .. } => *coord0_min > T::zero(),
        }
    }
}

/// `B_w^n x` on a finite vector.
pub fn shift_power<T: Real>(
    spec: &WeightSpec,
    x: &[Complex<T>],
    n: usize,
) -> Result<Vec<Complex<T>>> {
    if n == 0 {
        return Ok(x.to_vec());
    }
    if x.len() <= n {
        return Ok(Vec::new());
    }
    let series = LogProductSeries::build(spec, x.len() - 1)?;
    Ok(apply_shift_power(&series, x, n))
}

/// Orbit summary: per-step norms and first coordinates, plus hit times of
/// labelled regions.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitTrace<T> {
    /// `(n, ln || B^n x ||_p on the truncated support, |<e_0^*, B^n x>|)`.
    pub entries: Vec<(usize, T, T)>,
    /// Hit times per region label, sorted.
    pub visit_sets: Vec<(String, Vec<usize>)>,
    pub horizon: usize,
}

impl<T: Real> OrbitTrace<T> {
    /// CSV export: `n, log_norm, coord0_abs` plus one hit flag per region.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        let labels: Vec<&str> = self.visit_sets.iter().map(|(l, _)| l.as_str()).collect();
        writeln!(w, "n,log_norm,coord0_abs,{}", labels.join(","))?;
        for (n, log_norm, coord0) in &self.entries {
            let flags: Vec<&str> = self
                .visit_sets
                .iter()
                .map(|(_, hits)| if hits.binary_search(n).is_ok() { "1" } else { "0" })
                .collect();
            writeln!(w, "{n},{log_norm},{coord0},{}", flags.join(","))?;
        }
        Ok(())
    }
}

/// Walk the orbit up to the horizon, recording norms and region hits.
pub fn orbit_trace<T: Real>(
    spec: &WeightSpec,
    x: &[Complex<T>],
    regions: &[(String, Region<T>)],
    horizon: usize,
    p: T,
    tail_slack: T,
) -> Result<OrbitTrace<T>> {
    let series = LogProductSeries::build(spec, x.len().max(2) - 1 + horizon)?;
    let mut entries = Vec::with_capacity(horizon + 1);
    let mut hits: Vec<Vec<usize>> = vec![Vec::new(); regions.len()];
    for n in 0..=horizon {
        let y = if n == 0 { x.to_vec() } else { apply_shift_power(&series, x, n) };
        let norm = lp_norm(&y, p);
        let coord0 = y.first().map_or(T::zero(), |z| z.norm());
        entries.push((n, norm.ln(), coord0));
        for (i, (_, region)) in regions.iter().enumerate() {
            if region.contains(&y, p, tail_slack) {
                hits[i].push(n);
            }
        }
    }
    Ok(OrbitTrace {
        entries,
        visit_sets: regions
            .iter()
            .map(|(label, _)| label.clone())
            .zip(hits)
            .collect(),
        horizon,
    })
}

/// Visit-density estimates over trailing dyadic prefixes.
#[derive(Clone, Debug, Serialize)]
pub struct VisitStats<T> {
    pub hits: Vec<usize>,
    pub lower_density_estimate: T,
    pub upper_density_estimate: T,
}

/// Hit times of the region along the orbit, with lower/upper density
/// estimated as the min/max hit frequency over the prefixes
/// `horizon, horizon/2, ..., horizon/64`.
pub fn visit_density<T: Real>(
    spec: &WeightSpec,
    x: &[Complex<T>],
    region: &Region<T>,
    horizon: usize,
    p: T,
    tail_slack: T,
) -> Result<VisitStats<T>> {
    let trace = orbit_trace(
        spec,
        x,
        &[("region".to_string(), region.clone())],
        horizon,
        p,
        tail_slack,
    )?;
    let hits = trace.visit_sets.into_iter().next().expect("one region").1;
    let mut lower = T::infinity();
    let mut upper = T::zero();
    for k in 0..=6usize {
        let n = horizon >> k;
        if n == 0 {
            break;
        }
        let count = hits.iter().filter(|&&h| h <= n).count();
        let freq = T::of_usize(count) / T::of_usize(n + 1);
        lower = lower.min(freq);
        upper = upper.max(freq);
    }
    if !lower.is_finite() {
        lower = T::zero();
    }
    Ok(VisitStats { hits, lower_density_estimate: lower, upper_density_estimate: upper })
}

/// Monte Carlo witness that the joint pullback mass
/// `q_n = P_x~m_u(B_u^n x in K and B_v^n x in K)` empties out.
#[derive(Clone, Debug, Serialize)]
pub struct PullbackWitness<T> {
    /// First time with `q_n + 3 SE < epsilon`.
    pub n_star: usize,
    /// The estimate at `n_star` under `m_u`.
    pub est_joint_pullback: T,
    pub std_error: T,
    pub epsilon: T,
    /// Corroborating estimate at `n_star` with samples from `m_v`.
    pub est_under_m_v: T,
    /// Estimates `q_0 .. q_{n_star}` under `m_u`.
    pub q_path: Vec<T>,
}

/// Search for the first `n` at which the joint pullback estimate (plus three
/// standard errors) falls below `epsilon`. The region must exclude the
/// origin.
#[allow(clippy::too_many_arguments)]
pub fn empirical_orthogonality_witness<T: SampleReal>(
    u: &WeightSpec,
    v: &WeightSpec,
    m_u: &InvariantProductMeasure<T>,
    m_v: &InvariantProductMeasure<T>,
    region: &Region<T>,
    mc_samples: usize,
    horizon: usize,
    seed: u64,
    epsilon: T,
) -> Result<PullbackWitness<T>>
where
    StandardNormal: Distribution<T>,
{
    if !region.excludes_zero(m_u.p()) {
        return Err(Error::ConfigError(
            "witness region must exclude the origin (center norm > radius)".into(),
        ));
    }
    let center_len = match region {
        Region::Ball { center, .. } => center.len(),
        Region::NormBandCoord0 { .. } => 1,
    };
    let truncation = horizon + center_len + 8;
    if truncation > m_u.horizon().min(m_v.horizon()) {
        return Err(Error::HorizonExceeded(truncation));
    }
    let series_u: LogProductSeries<T> = LogProductSeries::build(u, truncation)?;
    let series_v: LogProductSeries<T> = LogProductSeries::build(v, truncation)?;
    let p = m_u.p();

    let samples = m_u.sample_many(mc_samples, truncation, seed)?;
    let samples_v = m_v.sample_many(mc_samples, truncation, seed.wrapping_add(0x5bd1e995))?;
    let three = T::of(3.0);
    let mut q_path = Vec::new();
    for n in 0..=horizon {
        let joint = |series_a: &LogProductSeries<T>,
                     series_b: &LogProductSeries<T>,
                     xs: &[Vec<Complex<T>>]| {
            let hits = xs
                .iter()
                .filter(|x| {
                    let ya = apply_shift_power(series_a, x, n);
                    if !region.contains(&ya, p, T::zero()) {
                        return false;
                    }
                    let yb = apply_shift_power(series_b, x, n);
                    region.contains(&yb, p, T::zero())
                })
                .count();
            T::of_usize(hits) / T::of_usize(xs.len())
        };
        let q = joint(&series_u, &series_v, &samples);
        q_path.push(q);
        let se = crate::stats::bernoulli_std_error(q, mc_samples);
        if q + three * se < epsilon {
            let q_v = joint(&series_u, &series_v, &samples_v);
            return Ok(PullbackWitness {
                n_star: n,
                est_joint_pullback: q,
                std_error: se,
                epsilon,
                est_under_m_v: q_v,
                q_path,
            });
        }
    }
    Err(Error::NoWitnessFound(horizon))
}

/// Transfer data for frequent hypercyclicity: the supremum
/// `K = sup_{n,k} |v_{k+1} .. v_{k+n} / u_{k+1} .. u_{k+n}|` and the limit of
/// the product ratio.
#[derive(Clone, Debug, Serialize)]
pub struct FhcTransfer<T> {
    /// `ln K` over the examined horizon.
    pub k_hat_log: T,
    /// `exp(k_hat_log)` (may overflow to infinity; the log is the datum).
    pub k_hat: T,
    /// Certified limit of `(u_1..u_n)/(v_1..v_n)`, when it exists.
    pub a_hat: Verdict,
    pub a_value: Option<T>,
}

/// Estimate the transfer constant and the product-ratio limit. When the
/// limit exists (non-zero), the two shifts have the same frequently
/// hypercyclic vectors.
pub fn fhc_transfer_constant<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    horizon: usize,
    cfg: &OrbitConfig,
) -> Result<FhcTransfer<T>> {
    let su: LogProductSeries<T> = LogProductSeries::build(u, horizon)?;
    let sv: LogProductSeries<T> = LogProductSeries::build(v, horizon)?;
    // D_m = ln |v_1..v_m| - ln |u_1..u_m|; the segment ratio for (k, n) is
    // D_{k+n} - D_k, so K is the maximal rise of D over its running minimum
    let mut min_prefix = T::zero();
    let mut k_log = T::zero();
    for m in 1..=horizon {
        let d = sv.log(m) - su.log(m);
        k_log = k_log.max(d - min_prefix);
        min_prefix = min_prefix.min(d);
    }
    let logs: Vec<T> = (1..=horizon).map(|n| su.log(n) - sv.log(n)).collect();
    let (a_hat, a_value) = match detect_log_limit(
        &logs,
        1e-6,
        cfg.weights.divergence_log_threshold,
    ) {
        LimitDetection::Limit(l) => (
            Verdict::established(Rule::LimitScale, json!({"a_hat": l.as_f64()})),
            Some(l),
        ),
        LimitDetection::Diverged { last } => (
            Verdict::refuted(
                Rule::LimitScale,
                json!({"lambda_log_last": last.as_f64()}),
            ),
            None,
        ),
        LimitDetection::Unresolved => {
            (Verdict::undecided(Rule::LimitScale, json!({"horizon": horizon})), None)
        }
    };
    Ok(FhcTransfer { k_hat_log: k_log, k_hat: k_log.exp(), a_hat, a_value })
}
