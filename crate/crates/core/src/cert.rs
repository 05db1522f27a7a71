//! Finite-horizon certification of non-negative series.
//!
//! The criteria in this crate reduce to questions of the form "does
//! `sum t_n` converge?". A finite horizon cannot answer that in general, so
//! certificates are issued only under explicit rules:
//!
//! * convergence — trailing-window geometric domination (term-ratio or root
//!   form, with an explicit tail bound), or geometric decay of dyadic block
//!   sums (covers p-series-type terms);
//! * divergence — terms bounded away from zero over the trailing window,
//!   sustained dyadic block sums, or a partial-sum blow-up with
//!   non-decaying blocks.
//!
//! Anything else is reported `Undecided` together with the horizon used.
//! Terms are passed in log form so that products of length 10^5 and beyond
//! never overflow.

use serde::{Deserialize, Serialize};

use crate::real::Real;

/// Convergence status of a series at a horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesStatus {
    Converges,
    Diverges,
    Undecided,
}

/// The rule backing a series certificate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum TailRule {
    /// Symbolic: terms bounded by `scale * q^n` from the spec structure.
    SymbolicGeometric { q: f64, scale: f64 },
    /// Observed term ratio bounded by `q < 1` over the trailing window.
    RatioWindow { q: f64 },
    /// Observed `t_n^{1/n}` bounded by `q < 1` over the trailing window.
    RootWindow { q: f64, scale_log: f64 },
    /// Dyadic block sums decay with ratio at most `ratio < 1`.
    BlockDecay { ratio: f64 },
    /// Every term is zero.
    AllZero,
    /// Terms are identically zero from this index on (through the horizon,
    /// including the whole trailing window).
    EventuallyZero { from: usize },
    /// Terms bounded below over the trailing window.
    TermsDoNotVanish { floor: f64 },
    /// Last dyadic blocks all above the floor and not decaying.
    BlocksSustained { floor: f64 },
    /// Partial sum exceeded the configured threshold with non-decaying blocks.
    PartialSumThreshold { sum: f64 },
    /// No rule applied.
    Inconclusive,
}

/// Certificate for `sum_{n=1}^{horizon} t_n` with tail information.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesCertificate<T> {
    pub status: SeriesStatus,
    /// Partial sum over the examined range (may be infinite for exploding
    /// terms; that is part of the evidence).
    pub partial_sum: T,
    /// Index of the last examined term.
    pub horizon: usize,
    pub rule: TailRule,
    /// Certified bound on the remainder beyond the horizon (convergent only).
    pub tail_bound: Option<T>,
}

/// Thresholds for the certification rules.
#[derive(Clone, Copy, Debug)]
pub struct CertConfig {
    /// Fraction of the horizon forming the trailing window.
    pub window_frac: f64,
    /// Maximal admissible geometric ratio `q`.
    pub ratio_max: f64,
    /// Maximal admissible dyadic block-sum ratio for convergence.
    pub block_ratio_max: f64,
    /// Minimal block-sum ratio counting as "sustained" for divergence.
    /// Divergent series have block ratios tending to 1; a threshold close to 1
    /// keeps convergent-but-slow series (block sums ~ 1/j^2) out.
    pub block_sustain: f64,
    /// Absolute floor for sustained blocks / non-vanishing terms.
    pub term_floor: f64,
    /// Number of trailing complete dyadic blocks examined.
    pub blocks_required: usize,
    /// Partial-sum divergence threshold.
    pub divergence_sum: f64,
}

impl Default for CertConfig {
    fn default() -> Self {
        CertConfig {
            window_frac: 0.25,
            ratio_max: 0.999,
            block_ratio_max: 0.85,
            block_sustain: 0.95,
            term_floor: 1e-8,
            blocks_required: 4,
            divergence_sum: 1e9,
        }
    }
}

/// Certify `sum t_n` from `log_terms[i] = ln t_{i+1}` (terms indexed from 1).
pub fn certify_log_terms<T: Real>(log_terms: &[T], cfg: &CertConfig) -> SeriesCertificate<T> {
    let n_terms = log_terms.len();
    let partial_sum: T = log_terms.iter().map(|l| l.exp()).sum();
    if n_terms == 0 {
        return SeriesCertificate {
            status: SeriesStatus::Undecided,
            partial_sum,
            horizon: 0,
            rule: TailRule::Inconclusive,
            tail_bound: None,
        };
    }
    let done = |status, rule, tail_bound| SeriesCertificate {
        status,
        partial_sum,
        horizon: n_terms,
        rule,
        tail_bound,
    };

    let last_nonzero = log_terms.iter().rposition(|l| *l != T::neg_infinity());
    let last_nonzero = match last_nonzero {
        None => return done(SeriesStatus::Converges, TailRule::AllZero, Some(T::zero())),
        Some(i) => i,
    };

    let w_start = ((n_terms as f64) * (1.0 - cfg.window_frac)).floor() as usize;
    let w_start = w_start.min(n_terms - 1);
    let window = &log_terms[w_start..];

    // Terms identically zero across the whole trailing window: settled.
    // (Zero runs that merely reach into the window prove nothing: sparse
    // spike trains have ever-longer gaps while the spikes keep growing.)
    if last_nonzero < w_start {
        return done(
            SeriesStatus::Converges,
            TailRule::EventuallyZero { from: last_nonzero + 2 },
            Some(T::zero()),
        );
    }

    // Asymptotic decay-rate guard shared by both geometric rules: two-level
    // Richardson extrapolation of the mean log-slope over dyadic segments.
    // Subgeometric terms (1/n, 1/n^2, ...) have window ratios below 1 at
    // small horizons, but their extrapolated slope is 0 and blocks the
    // certificate at any horizon; genuinely geometric terms keep their slope.
    let slope_guard = if n_terms >= 16 {
        let seg = |hi: usize, lo: usize| {
            (log_terms[hi - 1] - log_terms[lo - 1]) / T::of_usize(hi - lo)
        };
        let s1 = seg(n_terms, n_terms / 2);
        let s2 = seg(n_terms / 2, n_terms / 4);
        let s = T::of(2.0) * s1 - s2;
        // zero terms at a probe point poison the slope; disable the
        // geometric rules rather than guess
        Some(if s.is_nan() { T::infinity() } else { s })
    } else {
        None
    };

    // Term-ratio form of geometric domination.
    if window.len() >= 2 {
        let mut q_log = T::neg_infinity();
        for pair in window.windows(2) {
            let r = pair[1] - pair[0];
            if r.is_nan() {
                q_log = T::infinity();
                break;
            }
            q_log = q_log.max(r);
        }
        if let Some(s) = slope_guard {
            q_log = q_log.max(s);
        }
        if q_log < T::of(cfg.ratio_max.ln()) {
            let q = q_log.exp();
            let t_last = log_terms[n_terms - 1].exp();
            let tail = t_last * q / (T::one() - q);
            return done(
                SeriesStatus::Converges,
                TailRule::RatioWindow { q: q.as_f64() },
                Some(tail),
            );
        }
    }

    // Root form: t_n <= c * q^n. The window maximum of t_n^{1/n} alone is
    // unsound for subgeometric terms (for t_n = 1/n it sits well below 1 at
    // any finite horizon while the series diverges), so the admissible q also
    // caps the two-level Richardson extrapolation of the root sequence,
    // which strips both the O(ln n / n) and O(1/n) transients and exposes
    // limits at 1.
    if let Some(slope) = slope_guard {
        let mut window_max = T::neg_infinity();
        for (i, l) in window.iter().enumerate() {
            let n = T::of_usize(w_start + i + 1);
            window_max = window_max.max(*l / n);
        }
        let q_log = window_max.max(slope);
        if q_log < T::of(cfg.ratio_max.ln()) {
            let mut c_log = T::neg_infinity();
            for (i, l) in window.iter().enumerate() {
                let n = T::of_usize(w_start + i + 1);
                c_log = c_log.max(*l - n * q_log);
            }
            let q = q_log.exp();
            let tail =
                (c_log + T::of_usize(n_terms + 1) * q_log).exp() / (T::one() - q);
            return done(
                SeriesStatus::Converges,
                TailRule::RootWindow { q: q.as_f64(), scale_log: c_log.as_f64() },
                Some(tail),
            );
        }
    }

    // Dyadic block sums S_j over [2^j, 2^{j+1}), complete blocks only.
    let mut blocks: Vec<T> = Vec::new();
    let mut j = 0usize;
    loop {
        let lo = 1usize << j;
        let hi = (1usize << (j + 1)) - 1;
        if hi > n_terms {
            break;
        }
        let s: T = log_terms[lo - 1..hi].iter().map(|l| l.exp()).sum();
        blocks.push(s);
        j += 1;
    }
    if blocks.len() > cfg.blocks_required {
        let tail_blocks = &blocks[blocks.len() - (cfg.blocks_required + 1)..];
        let ratios: Vec<T> = tail_blocks
            .windows(2)
            .map(|p| if p[0] > T::zero() { p[1] / p[0] } else { T::infinity() })
            .collect();
        let max_ratio = ratios.iter().cloned().fold(T::neg_infinity(), T::max);
        let min_ratio = ratios.iter().cloned().fold(T::infinity(), T::min);
        let last = *tail_blocks.last().unwrap();
        if max_ratio <= T::of(cfg.block_ratio_max) {
            let r = max_ratio.max(T::zero());
            let tail = last * r / (T::one() - r);
            return done(
                SeriesStatus::Converges,
                TailRule::BlockDecay { ratio: max_ratio.as_f64().max(0.0) },
                Some(tail),
            );
        }
        let floor = T::of(cfg.term_floor);
        if tail_blocks.iter().all(|s| *s >= floor) && min_ratio >= T::of(cfg.block_sustain) {
            return done(
                SeriesStatus::Diverges,
                TailRule::BlocksSustained { floor: cfg.term_floor },
                None,
            );
        }
    }

    // Terms bounded away from zero with a flat or growing trend (covers
    // constant and exploding terms; a steady decrease falls through, since a
    // floor over a finite window says nothing about the limit then).
    let floor_log = T::of(cfg.term_floor.ln());
    if window.len() >= 4 && window.iter().all(|l| *l >= floor_log) {
        let half = window.len() / 2;
        let mean = |s: &[T]| s.iter().cloned().sum::<T>() / T::of_usize(s.len());
        if mean(&window[half..]) >= mean(&window[..half]) - T::of(0.02) {
            return done(
                SeriesStatus::Diverges,
                TailRule::TermsDoNotVanish { floor: cfg.term_floor },
                None,
            );
        }
    }

    if partial_sum > T::of(cfg.divergence_sum) {
        return done(
            SeriesStatus::Diverges,
            TailRule::PartialSumThreshold { sum: partial_sum.as_f64() },
            None,
        );
    }

    done(SeriesStatus::Undecided, TailRule::Inconclusive, None)
}

/// Outcome of the tail-limit detector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LimitDetection<T> {
    /// Tail stabilized; the sequence `exp(log_vals)` has this limit estimate.
    Limit(T),
    /// The log-values crossed the divergence guard: no limit in `(0, inf)`.
    Diverged { last: T },
    /// Neither certified at this horizon.
    Unresolved,
}

/// Detect the limit of a positive sequence given by its logs
/// (`log_vals[i] = ln x_{i+1}`).
///
/// Uses dyadic Richardson extrapolation: for tails behaving like
/// `ln x_n = L + c/n + o(1/n)`, the extrapolant `2 ln x_N - ln x_{N/2}`
/// cancels the `c/n` term, so two extrapolants at scales `N` and `N/2`
/// agreeing within `stab_tol` certify the limit with `O(1/N^2)` bias.
/// A plain tail average would carry the full `O(1/N)` bias.
pub fn detect_log_limit<T: Real>(
    log_vals: &[T],
    stab_tol: f64,
    divergence_guard: f64,
) -> LimitDetection<T> {
    let n = log_vals.len();
    if n == 0 {
        return LimitDetection::Unresolved;
    }
    let last = log_vals[n - 1];
    if last.abs() >= T::of(divergence_guard) {
        return LimitDetection::Diverged { last };
    }
    if n < 8 {
        return LimitDetection::Unresolved;
    }
    let at = |k: usize| log_vals[k - 1];
    let r1 = T::of(2.0) * at(n) - at(n / 2);
    let r2 = T::of(2.0) * at(n / 2) - at(n / 4);
    let tol = T::of(stab_tol) * (T::one() + r1.abs());
    if (r1 - r2).abs() <= tol {
        LimitDetection::Limit(r1.exp())
    } else {
        LimitDetection::Unresolved
    }
}

/// Convenience wrapper for terms given in linear scale.
pub fn certify_terms<T: Real>(terms: &[T], cfg: &CertConfig) -> SeriesCertificate<T> {
    let logs: Vec<T> = terms
        .iter()
        .map(|t| if *t <= T::zero() { T::neg_infinity() } else { t.ln() })
        .collect();
    certify_log_terms(&logs, cfg)
}
