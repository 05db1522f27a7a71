//! Orthogonality and similarity tests for pairs of weighted shifts.
//!
//! Everything here is driven by the ratio of partial products
//! `lambda_n = (u_1 .. u_n) / (v_1 .. v_n)`:
//!
//! * the shifts are similar iff `|lambda_n|` is bounded above and below;
//! * windowed divergence of `|lambda_n|` (down to 0 or up to infinity over
//!   arbitrarily long index windows) forces orthogonality;
//! * an exact periodic identity `lambda_{dm+j} = C` yields a common periodic
//!   point and hence non-orthogonality;
//! * equivalent invariant Gaussian product measures exist iff
//!   `sum (1 - kappa |lambda_n|)^2` converges for some `kappa > 0`.
//!
//! The report aggregates these rules and never claims non-orthogonality from
//! similarity alone (that implication is open).


use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cert::SeriesStatus;
use crate::error::{Error, Result};
use crate::hellinger;
use crate::real::Real;
use crate::scalar::SpecScalar;
use crate::verdict::{Rule, Verdict};
use crate::weights::{
    summability_from_series, LogProductSeries, SummabilityVerdict, WeightSpec, WeightsConfig,
};

/// Thresholds for the ratio-based criteria.
#[derive(Clone, Copy, Debug)]
pub struct OrthoConfig {
    /// Log threshold for the windowed divergence rule (`exp(+-30)`).
    pub window_threshold: f64,
    /// Dyadic epochs required for a windowed divergence certificate.
    pub epochs_required: usize,
    /// Dyadic epochs with fresh extrema required by the oscillation rule.
    pub oscillation_epochs: usize,
    /// Total log-growth of the running extremum required by the oscillation
    /// rule (filters convergent drifts whose extrema keep inching forward).
    pub oscillation_growth: f64,
    /// Largest period searched for a common periodic point.
    pub d_max: usize,
    /// Periodic identity checks per `(d, j)` candidate.
    pub m_check: usize,
    /// Tolerance on log-ratios for the floating fallback of exact checks.
    pub float_tol: f64,
    /// Coordinate truncation for constructed witness vectors.
    pub witness_truncation: usize,
    pub weights: WeightsConfig,
}

impl Default for OrthoConfig {
    fn default() -> Self {
        OrthoConfig {
            window_threshold: 30.0,
            epochs_required: 3,
            oscillation_epochs: 5,
            oscillation_growth: 4.0f64.ln(),
            d_max: 64,
            m_check: 1000,
            float_tol: 1e-12,
            witness_truncation: 2048,
            weights: WeightsConfig::default(),
        }
    }
}

/// Log-ratios `ln |lambda_n| = L^u_n - L^v_n` for `n = 0..=horizon`.
#[derive(Clone, Debug)]
pub struct RatioSeries<T> {
    pub lambdas_log: Vec<T>,
}

impl<T: Real> RatioSeries<T> {
    pub fn build(u: &LogProductSeries<T>, v: &LogProductSeries<T>) -> Self {
        let n = u.horizon().min(v.horizon());
        RatioSeries {
            lambdas_log: (0..=n).map(|i| u.log(i) - v.log(i)).collect(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.lambdas_log.len() - 1
    }
}

/// Running-extrema statistics over dyadic epochs, the finite-horizon proxy
/// for `limsup = inf` / `liminf = 0` of the log-ratio.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct OscillationStats {
    pub up_epochs: usize,
    pub up_growth: f64,
    pub down_epochs: usize,
    pub down_growth: f64,
}

fn oscillation_stats<T: Real>(vals: &[T]) -> OscillationStats {
    // vals[i] = log-ratio at n = i + 1
    if vals.is_empty() {
        return OscillationStats::default();
    }
    let mut stats = OscillationStats::default();
    let mut run_max = vals[0];
    let mut run_min = vals[0];
    let first_max = run_max.as_f64();
    let first_min = run_min.as_f64();
    let margin = T::of(1e-12);
    let mut j = 0usize;
    loop {
        let lo = 1usize << j;
        let hi = ((1usize << (j + 1)) - 1).min(vals.len());
        if lo > vals.len() {
            break;
        }
        let mut improved_up = false;
        let mut improved_down = false;
        for &x in &vals[lo - 1..hi] {
            if x > run_max + margin {
                run_max = x;
                improved_up = true;
            }
            if x < run_min - margin {
                run_min = x;
                improved_down = true;
            }
        }
        if j >= 1 {
            if improved_up {
                stats.up_epochs += 1;
            }
            if improved_down {
                stats.down_epochs += 1;
            }
        }
        j += 1;
    }
    stats.up_growth = run_max.as_f64() - first_max;
    stats.down_growth = first_min - run_min.as_f64();
    stats
}

/// Structural log-slope of the ratio when both specs expose one:
/// `ln|lambda_n| = n * slope + bounded`, with slopes at rounding scale
/// snapped to zero.
fn symbolic_ratio_slope(u: &WeightSpec, v: &WeightSpec, cfg: &OrthoConfig) -> Option<(f64, f64)> {
    let (slope, band) = u.ratio_structure(v)?;
    let slope = if slope.abs() <= cfg.weights.gamma_snap { 0.0 } else { slope };
    Some((slope, band))
}

/// Decide similarity of the two shifts: `|lambda_n|` bounded above and below.
pub fn similarity_test<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    horizon: usize,
    cfg: &OrthoConfig,
) -> Result<Verdict> {
    let su: LogProductSeries<T> = LogProductSeries::build(u, horizon)?;
    let sv: LogProductSeries<T> = LogProductSeries::build(v, horizon)?;
    Ok(similarity_from_series(u, v, &su, &sv, cfg))
}

pub(crate) fn similarity_from_series<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    su: &LogProductSeries<T>,
    sv: &LogProductSeries<T>,
    cfg: &OrthoConfig,
) -> Verdict {
    if let Some((slope, band)) = symbolic_ratio_slope(u, v, cfg) {
        return if slope == 0.0 {
            Verdict::established(
                Rule::SimilarityBand,
                json!({"symbolic": true, "log_band": band}),
            )
        } else {
            Verdict::refuted(
                Rule::RatioDivergence,
                json!({"symbolic": true, "log_slope_per_index": slope}),
            )
        };
    }

    let ratio = RatioSeries::build(su, sv);
    let vals = &ratio.lambdas_log[1..];
    let guard = T::of(cfg.weights.divergence_log_threshold);
    if let Some(x) = vals.iter().find(|x| x.abs() >= guard) {
        return Verdict::refuted(
            Rule::RatioDivergence,
            json!({"crossed_log_threshold": cfg.weights.divergence_log_threshold,
                   "value": x.as_f64()}),
        );
    }

    let osc = oscillation_stats(vals);
    let up = osc.up_epochs >= cfg.oscillation_epochs && osc.up_growth >= cfg.oscillation_growth;
    let down =
        osc.down_epochs >= cfg.oscillation_epochs && osc.down_growth >= cfg.oscillation_growth;
    if up || down {
        return Verdict::refuted(Rule::RatioOscillation, json!({ "oscillation": osc }));
    }

    // stable band: no fresh extrema over the trailing dyadic epochs
    let horizon = ratio.horizon();
    if horizon >= 64 {
        let tail_start = horizon / 8;
        let head = oscillation_stats(&vals[..tail_start]);
        let all = oscillation_stats(vals);
        if all.up_growth <= head.up_growth + 1e-12 && all.down_growth <= head.down_growth + 1e-12
        {
            let lo = vals.iter().cloned().fold(T::infinity(), T::min);
            let hi = vals.iter().cloned().fold(T::neg_infinity(), T::max);
            return Verdict::established(
                Rule::SimilarityBand,
                json!({"symbolic": false, "log_band": [lo.as_f64(), hi.as_f64()],
                       "stable_from": tail_start}),
            );
        }
    }
    Verdict::undecided(Rule::SimilarityBand, json!({"horizon": horizon}))
}

/// Windowed orthogonality criterion: over every window length `0..=n_window`,
/// the windowed max of `ln|lambda|` must fall below `-threshold` along a
/// subsequence (or the windowed min above `+threshold`). Only the longest
/// window is computed; it dominates the shorter ones.
pub fn window_orthogonality_test<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    n_window: usize,
    horizon: usize,
    cfg: &OrthoConfig,
) -> Result<Verdict> {
    let su: LogProductSeries<T> = LogProductSeries::build(u, horizon)?;
    let sv: LogProductSeries<T> = LogProductSeries::build(v, horizon)?;
    Ok(window_from_series(u, v, &su, &sv, n_window, cfg))
}

pub(crate) fn window_from_series<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    su: &LogProductSeries<T>,
    sv: &LogProductSeries<T>,
    n_window: usize,
    cfg: &OrthoConfig,
) -> Verdict {
    if let Some((slope, _)) = symbolic_ratio_slope(u, v, cfg) {
        if slope != 0.0 {
            let side = if slope < 0.0 { "down" } else { "up" };
            return Verdict::established(
                Rule::WindowDivergence,
                json!({"symbolic": true, "log_slope_per_index": slope, "side": side,
                       "window": n_window}),
            );
        }
    }

    let ratio = RatioSeries::build(su, sv);
    let vals = &ratio.lambdas_log[1..];
    let w = n_window + 1;
    if vals.len() < w {
        return Verdict::undecided(Rule::WindowDivergence, json!({"horizon": ratio.horizon()}));
    }
    let thr = T::of(cfg.window_threshold);

    // sliding max / min with monotone deques
    let mut down_hits: Vec<usize> = Vec::new();
    let mut up_hits: Vec<usize> = Vec::new();
    let mut max_q: std::collections::VecDeque<usize> = Default::default();
    let mut min_q: std::collections::VecDeque<usize> = Default::default();
    for i in 0..vals.len() {
        while let Some(&b) = max_q.back() {
            if vals[b] <= vals[i] {
                max_q.pop_back();
            } else {
                break;
            }
        }
        max_q.push_back(i);
        while let Some(&b) = min_q.back() {
            if vals[b] >= vals[i] {
                min_q.pop_back();
            } else {
                break;
            }
        }
        min_q.push_back(i);
        if i + 1 >= w {
            let start = i + 1 - w;
            while *max_q.front().unwrap() < start {
                max_q.pop_front();
            }
            while *min_q.front().unwrap() < start {
                min_q.pop_front();
            }
            if vals[*max_q.front().unwrap()] <= -thr {
                down_hits.push(start + 1);
            }
            if vals[*min_q.front().unwrap()] >= thr {
                up_hits.push(start + 1);
            }
        }
    }

    let epochs = |hits: &[usize]| -> usize {
        let mut count = 0usize;
        let mut j = 0usize;
        loop {
            let lo = 1usize << j;
            let hi = (1usize << (j + 1)) - 1;
            if lo > vals.len() {
                break;
            }
            if hits.iter().any(|&n| n >= lo && n <= hi) {
                count += 1;
            }
            j += 1;
        }
        count
    };
    let down_epochs = epochs(&down_hits);
    let up_epochs = epochs(&up_hits);
    let longest_run = |hits: &[usize]| -> usize {
        let mut best = 0usize;
        let mut run = 0usize;
        let mut prev = usize::MAX;
        for &n in hits {
            run = if prev != usize::MAX && n == prev + 1 { run + 1 } else { 1 };
            best = best.max(run);
            prev = n;
        }
        best
    };

    let evidence = json!({
        "window": n_window,
        "threshold_log": cfg.window_threshold,
        "down_epochs": down_epochs,
        "up_epochs": up_epochs,
        "down_longest_interval": longest_run(&down_hits) + n_window,
        "up_longest_interval": longest_run(&up_hits) + n_window,
        "epochs_required": cfg.epochs_required,
    });
    if down_epochs >= cfg.epochs_required || up_epochs >= cfg.epochs_required {
        Verdict::established(Rule::WindowDivergence, evidence)
    } else {
        Verdict::undecided(Rule::WindowDivergence, evidence)
    }
}

/// `aT` vs `bT` for the same operator `T`: orthogonal iff `|a| != |b|`;
/// equal moduli share a non-trivial invariant measure by phase averaging.
pub fn scalar_pair_test(t_tag: &str, a: &SpecScalar, b: &SpecScalar) -> Result<Verdict> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let equal = match (a.exact(), b.exact()) {
        (Some(ra), Some(rb)) => ra.abs() == rb.abs(),
        _ => {
            let (ma, mb) = (a.modulus_f64(), b.modulus_f64());
            (ma - mb).abs() <= 1e-12 * (1.0 + ma.max(mb))
        }
    };
    let evidence = json!({
        "operator": t_tag,
        "modulus_a": a.modulus_f64(),
        "modulus_b": b.modulus_f64(),
    });
    Ok(if equal {
        Verdict::refuted(Rule::PhaseSymmetrization, evidence)
    } else {
        Verdict::established(Rule::ScalarPairModulus, evidence)
    })
}

/// A common periodic point certificate: `u_1..u_{dm+j} = C v_1..v_{dm+j}`
/// for all checked `m`, with the truncated common periodic vector.
#[derive(Clone, Debug)]
pub struct PeriodicWitness<T> {
    pub d: usize,
    pub j: usize,
    pub c: SpecScalar,
    /// Number of verified identity instances (m = 1..=checked_m).
    pub checked_m: usize,
    /// Identity verified in exact rational arithmetic.
    pub exact: bool,
    /// Truncated common periodic vector, supported on `{ md + j }`.
    pub vector: Vec<Complex<T>>,
    /// Exact coordinates when the weights evaluate rationally.
    pub vector_exact: Option<Vec<BigRational>>,
}

/// Incrementally extended exact ratio cache `lambda_n = prod u_i / prod v_i`.
struct ExactRatios<'a> {
    u: &'a WeightSpec,
    v: &'a WeightSpec,
    vals: Vec<BigRational>,
    broken: bool,
}

impl<'a> ExactRatios<'a> {
    fn new(u: &'a WeightSpec, v: &'a WeightSpec) -> Self {
        ExactRatios { u, v, vals: vec![BigRational::one()], broken: false }
    }

    fn get(&mut self, n: usize) -> Option<&BigRational> {
        if self.broken {
            return None;
        }
        while self.vals.len() <= n {
            let i = self.vals.len();
            let (wu, wv) = match (self.u.eval(i), self.v.eval(i)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    self.broken = true;
                    return None;
                }
            };
            match (wu.exact(), wv.exact()) {
                (Some(ra), Some(rb)) if !rb.is_zero() => {
                    let next = self.vals.last().unwrap() * ra / rb;
                    self.vals.push(next);
                }
                _ => {
                    self.broken = true;
                    return None;
                }
            }
        }
        Some(&self.vals[n])
    }
}

/// Search for a common non-zero periodic point. Requires both reciprocal
/// product series to certify convergent at exponent `p` (this is what places
/// the constructed witness inside `l_p`).
pub fn shared_periodic_point<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    p: T,
    horizon: usize,
    cfg: &OrthoConfig,
) -> Result<Option<PeriodicWitness<T>>> {
    let su: LogProductSeries<T> = LogProductSeries::build(u, horizon)?;
    let sv: LogProductSeries<T> = LogProductSeries::build(v, horizon)?;
    let summ_u = summability_from_series(u, &su, p, &cfg.weights);
    let summ_v = summability_from_series(v, &sv, p, &cfg.weights);
    ensure_summable(&summ_u)?;
    ensure_summable(&summ_v)?;
    Ok(shared_periodic_from_series(u, v, &su, &sv, cfg))
}

fn ensure_summable<T: Real>(s: &SummabilityVerdict<T>) -> Result<()> {
    match s.status {
        SeriesStatus::Converges => Ok(()),
        SeriesStatus::Diverges => Err(Error::NotSummable("Diverges")),
        SeriesStatus::Undecided => Err(Error::NotSummable("Undecided")),
    }
}

pub(crate) fn shared_periodic_from_series<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    su: &LogProductSeries<T>,
    sv: &LogProductSeries<T>,
    cfg: &OrthoConfig,
) -> Option<PeriodicWitness<T>> {
    let horizon = su.horizon().min(sv.horizon());
    let mut exact = ExactRatios::new(u, v);
    let use_exact = exact.get(1).is_some();
    let min_m = 8.min(cfg.m_check);

    for d in 1..=cfg.d_max {
        for j in 0..d {
            let m_max = if horizon >= j { ((horizon - j) / d).min(cfg.m_check) } else { 0 };
            if m_max < min_m {
                continue;
            }
            let mut ok = true;
            if use_exact {
                // compare lambda_{dm+j} against lambda_j exactly
                let c_ref = exact.get(j)?.clone();
                for m in 1..=m_max {
                    let val = exact.get(d * m + j)?;
                    if *val != c_ref {
                        ok = false;
                        break;
                    }
                }
            } else {
                let base = su.log(j) - sv.log(j);
                for m in 1..=m_max {
                    let n = d * m + j;
                    let diff = (su.log(n) - sv.log(n)) - base;
                    if diff.abs() > T::of(cfg.float_tol) * (T::one() + base.abs()) {
                        ok = false;
                        break;
                    }
                    let phase = (su.phase(n) - sv.phase(n)) - (su.phase(j) - sv.phase(j));
                    let wrapped = phase_distance(phase);
                    if wrapped > T::of(1e-9) {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let c = ratio_scalar(u, v, j);
                let (vector, vector_exact) =
                    witness_vector(u, su, d, j, cfg.witness_truncation.min(horizon));
                return Some(PeriodicWitness {
                    d,
                    j,
                    c,
                    checked_m: m_max,
                    exact: use_exact,
                    vector,
                    vector_exact,
                });
            }
        }
    }
    None
}

/// Verify the periodic identity for one specific `(d, j)` candidate and
/// build the witness on success. The search in
/// [`shared_periodic_point`] returns the minimal period; this entry point
/// checks a caller-chosen one (coarser periods can hold alongside finer
/// ones, e.g. when a finer parity pattern happens to cancel as well).
pub fn verify_periodic_identity<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    d: usize,
    j: usize,
    horizon: usize,
    cfg: &OrthoConfig,
) -> Result<Option<PeriodicWitness<T>>> {
    assert!(d >= 1 && j < d, "need d >= 1 and 0 <= j < d");
    let su: LogProductSeries<T> = LogProductSeries::build(u, horizon)?;
    let sv: LogProductSeries<T> = LogProductSeries::build(v, horizon)?;
    let m_max = if horizon >= j { ((horizon - j) / d).min(cfg.m_check) } else { 0 };
    if m_max == 0 {
        return Ok(None);
    }
    let mut exact = ExactRatios::new(u, v);
    let ok = if exact.get(1).is_some() {
        let c_ref = exact.get(j).cloned();
        match c_ref {
            Some(c_ref) => (1..=m_max).all(|m| exact.get(d * m + j) == Some(&c_ref)),
            None => false,
        }
    } else {
        let base = su.log(j) - sv.log(j);
        (1..=m_max).all(|m| {
            let n = d * m + j;
            let diff = (su.log(n) - sv.log(n)) - base;
            diff.abs() <= T::of(cfg.float_tol) * (T::one() + base.abs())
        })
    };
    if !ok {
        return Ok(None);
    }
    let c = ratio_scalar(u, v, j);
    let (vector, vector_exact) = witness_vector(u, &su, d, j, cfg.witness_truncation.min(horizon));
    Ok(Some(PeriodicWitness {
        d,
        j,
        c,
        checked_m: m_max,
        exact: exact.get(1).is_some(),
        vector,
        vector_exact,
    }))
}

/// Distance of a phase to the nearest multiple of 2 pi.
fn phase_distance<T: Real>(phase: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut r = phase % two_pi;
    if r < T::zero() {
        r += two_pi;
    }
    r.min(two_pi - r)
}

/// `C = (u_1 .. u_j) / (v_1 .. v_j)` as a scalar (1 for j = 0).
fn ratio_scalar(u: &WeightSpec, v: &WeightSpec, j: usize) -> SpecScalar {
    let mut c = SpecScalar::one();
    for i in 1..=j {
        if let (Ok(a), Ok(b)) = (u.eval(i), v.eval(i)) {
            c = c.mul(&a.div(&b));
        }
    }
    c
}

/// The common periodic vector `x = sum_m (u_1 .. u_{md+j})^{-1} e_{md+j}`,
/// truncated.
fn witness_vector<T: Real>(
    u: &WeightSpec,
    su: &LogProductSeries<T>,
    d: usize,
    j: usize,
    truncation: usize,
) -> (Vec<Complex<T>>, Option<Vec<BigRational>>) {
    let last = if truncation >= j { ((truncation - j) / d) * d + j } else { 0 };
    let mut vec = vec![Complex::new(T::zero(), T::zero()); last + 1];
    let mut m = 0usize;
    loop {
        let n = m * d + j;
        if n > last {
            break;
        }
        vec[n] = su.unit(n).conj() * (-su.log(n)).exp();
        m += 1;
    }
    let exact = crate::weights::exact_reciprocal_products(u, last).map(|recips| {
        let mut ex = vec![BigRational::zero(); last + 1];
        let mut m = 0usize;
        loop {
            let n = m * d + j;
            if n > last {
                break;
            }
            ex[n] = recips[n].clone();
            m += 1;
        }
        ex
    });
    (vec, exact)
}

/// Aggregate summary of an orthogonality report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Summary {
    Orthogonal,
    NotOrthogonal,
    Undecided,
}

/// Consolidated orthogonality report over all applicable rules.
#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityReport {
    pub summary: Summary,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periodic_witness: Option<PeriodicWitnessInfo>,
}

/// Serializable view of a periodic witness (without the vector payload).
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicWitnessInfo {
    pub d: usize,
    pub j: usize,
    pub c: SpecScalar,
    pub checked_m: usize,
    pub exact: bool,
}

/// Run the similarity, window, bounded-below, shared-periodic and
/// Gaussian-equivalence rules and aggregate them.
///
/// The summary is `Orthogonal` if any orthogonality rule is established,
/// `NotOrthogonal` if a non-orthogonality witness exists. Contradictory
/// established results are a bug, surfaced as `InternalInconsistency`.
pub fn orthogonality_report<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    p: T,
    n_window: usize,
    horizon: usize,
    cfg: &OrthoConfig,
) -> Result<OrthogonalityReport> {
    let su: LogProductSeries<T> = LogProductSeries::build(u, horizon)?;
    let sv: LogProductSeries<T> = LogProductSeries::build(v, horizon)?;

    let similarity = similarity_from_series(u, v, &su, &sv, cfg);
    let window = window_from_series(u, v, &su, &sv, n_window, cfg);

    // bounded below + not similar => orthogonal
    let bounded = match (u.modulus_lower_bound(), v.modulus_lower_bound()) {
        (Some(bu), Some(bv)) if bu > 0.0 && bv > 0.0 => {
            if similarity.status.refuted() {
                Verdict::established(
                    Rule::BoundedBelowDichotomy,
                    json!({"inf_u": bu, "inf_v": bv}),
                )
            } else {
                Verdict::undecided(
                    Rule::BoundedBelowDichotomy,
                    json!({"inf_u": bu, "inf_v": bv, "similarity": similarity.status}),
                )
            }
        }
        _ => Verdict::undecided(
            Rule::BoundedBelowDichotomy,
            json!({"bounded_below": false}),
        ),
    };

    // shared periodic point (only meaningful when both series are summable)
    let summ_u = summability_from_series(u, &su, p, &cfg.weights);
    let summ_v = summability_from_series(v, &sv, p, &cfg.weights);
    let both_summable = summ_u.status == SeriesStatus::Converges
        && summ_v.status == SeriesStatus::Converges;
    let witness = if both_summable {
        shared_periodic_from_series(u, v, &su, &sv, cfg)
    } else {
        None
    };
    let periodic = match &witness {
        Some(w) => Verdict::established(
            Rule::PeriodicWitness,
            json!({"d": w.d, "j": w.j, "checked_m": w.checked_m, "exact": w.exact}),
        ),
        None => Verdict::undecided(
            Rule::PeriodicWitness,
            json!({"searched_d_max": cfg.d_max, "both_summable": both_summable}),
        ),
    };

    let hcfg = hellinger::HellingerConfig {
        cert: cfg.weights.cert,
        divergence_guard: cfg.weights.divergence_log_threshold,
        weights: cfg.weights,
        ..hellinger::HellingerConfig::default()
    };
    let gaussian = match hellinger::gaussian_equivalence_from_series(u, v, &su, &sv, &hcfg) {
        Ok(g) => g.exists_kappa,
        Err(_) => Verdict::undecided(Rule::GaussianEquivalence, json!({"summable": false})),
    };

    let verdicts = vec![similarity, window.clone(), bounded.clone(), periodic, gaussian.clone()];
    let orthogonal = window.status.established() || bounded.status.established();
    let not_orthogonal = witness.is_some() || gaussian.status.established();
    let summary = match (orthogonal, not_orthogonal) {
        (true, true) => {
            return Err(Error::InternalInconsistency(format!(
                "orthogonality and non-orthogonality both established for the pair: {:?}",
                verdicts
                    .iter()
                    .map(|v| (v.rule, v.status))
                    .collect::<Vec<_>>()
            )))
        }
        (true, false) => Summary::Orthogonal,
        (false, true) => Summary::NotOrthogonal,
        (false, false) => Summary::Undecided,
    };
    Ok(OrthogonalityReport {
        summary,
        verdicts,
        periodic_witness: witness.map(|w| PeriodicWitnessInfo {
            d: w.d,
            j: w.j,
            c: w.c,
            checked_m: w.checked_m,
            exact: w.exact,
        }),
    })
}

#[cfg(test)]
mod tests;
