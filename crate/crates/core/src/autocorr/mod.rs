//! Overlap analysis of density profiles.
//!
//! For a probability density `p` with profile `f = sqrt(p)`, the scale-overlap
//! `Theta(lambda) = sqrt(lambda) int f(t) f(lambda t) dt` controls when two
//! product measures built from rescaled copies of `p` can be non-orthogonal.
//! The substitution `h_+(x) = f(e^x) e^{x/2}`, `h_-(x) = f(-e^x) e^{x/2}`
//! turns it into the autocorrelation
//! `Theta(lambda) = P h_+(ln lambda) + P h_-(ln lambda)` with
//! `P h(alpha) = int h(x) h(x + alpha) dx`, whose local behavior at 0 decides
//! the criterion: quadratic decay for profiles with square-integrable
//! derivative, linear decay with slope `-1/2 sum (jump)^2` when jumps exist.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cert::{certify_terms, detect_log_limit, CertConfig, LimitDetection, SeriesStatus};
use crate::error::{Error, Result};
use crate::measures::MarginalMeasure;
use crate::quad::{integrate, QuadConfig};
use crate::real::Real;
use crate::verdict::{Rule, Verdict};
use crate::weights::{Field, LogProductSeries, WeightSpec};

/// Declared smoothness of a profile (membership is not decidable from
/// samples, so the caller declares and the code checks for contradictions).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothClass {
    /// Square-integrable weak derivative: quadratic local behavior.
    W12,
    /// Piecewise C1 with listed jumps: linear local behavior.
    PiecewiseC1,
    Unknown,
}

/// The shape of a profile `f >= 0` on the line (always an L2-normalized
/// square root of a probability density).
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileKind<T> {
    /// `f = (b - a)^{-1/2}` on `[a, b]`.
    Uniform { a: T, b: T },
    /// `f = (2 pi s^2)^{-1/4} exp(-t^2 / (4 s^2))`.
    GaussianProfile { sigma: T },
    /// Piecewise-constant profile values on a uniform partition.
    Grid { lo: T, hi: T, values: Vec<T>, discontinuities: Vec<T> },
    /// `h(x) = base(sign * e^x) e^{x/2}` (the log-scale substitution).
    LogSide { base: Box<ProfileKind<T>>, negative: bool },
}

/// A profile with its declared smoothness class.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile<T> {
    pub kind: ProfileKind<T>,
    pub smooth_class: SmoothClass,
}

/// One-sided evaluation side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl<T: Real> ProfileKind<T> {
    fn eval(&self, x: T) -> T {
        match self {
            ProfileKind::Uniform { a, b } => {
                if x >= *a && x <= *b {
                    T::one() / (*b - *a).sqrt()
                } else {
                    T::zero()
                }
            }
            ProfileKind::GaussianProfile { sigma } => {
                let s2 = *sigma * *sigma;
                let norm = (T::of(2.0) * T::PI() * s2).powf(T::of(-0.25));
                norm * (-(x * x) / (T::of(4.0) * s2)).exp()
            }
            ProfileKind::Grid { lo, hi, values, .. } => {
                if x < *lo || x > *hi {
                    return T::zero();
                }
                let width = (*hi - *lo) / T::of_usize(values.len());
                let idx = ((x - *lo) / width).floor().to_usize().unwrap_or(0);
                values[idx.min(values.len() - 1)]
            }
            ProfileKind::LogSide { base, negative } => {
                let t = if *negative { -x.exp() } else { x.exp() };
                base.eval(t) * (x / T::of(2.0)).exp()
            }
        }
    }

    fn eval_side(&self, x: T, side: Side) -> T {
        let eps = T::of(1e-12) * (T::one() + x.abs());
        match side {
            Side::Left => self.eval(x - eps),
            Side::Right => self.eval(x + eps),
        }
    }

    /// Effective support (profiles below 1e-16 of peak truncated).
    fn support(&self) -> (T, T) {
        match self {
            ProfileKind::Uniform { a, b } => (*a, *b),
            ProfileKind::GaussianProfile { sigma } => {
                let r = *sigma * T::of(14.0);
                (-r, r)
            }
            ProfileKind::Grid { lo, hi, .. } => (*lo, *hi),
            ProfileKind::LogSide { base, negative } => {
                let (blo, bhi) = base.support();
                // the substitution sees |t| for t in the chosen half-line
                let (t_lo, t_hi) = if *negative {
                    ((-bhi).max(T::zero()), (-blo).max(T::zero()))
                } else {
                    (blo.max(T::zero()), bhi.max(T::zero()))
                };
                if t_hi <= T::zero() {
                    return (T::zero(), T::of(-1.0)); // empty
                }
                let hi = t_hi.ln();
                // h(x) <= sup f * e^{x/2}: cut where the L2 tail is < 1e-20
                let lo = match t_lo > T::zero() {
                    true => t_lo.ln(),
                    false => T::of(-90.0) + hi.min(T::zero()),
                };
                (lo, hi)
            }
        }
    }

    /// Jump points with one-sided values `(u, left, right)`.
    fn jumps(&self) -> Vec<(T, T, T)> {
        match self {
            ProfileKind::Uniform { a, b } => {
                let c = T::one() / (*b - *a).sqrt();
                vec![(*a, T::zero(), c), (*b, c, T::zero())]
            }
            ProfileKind::GaussianProfile { .. } => vec![],
            ProfileKind::Grid { lo, hi, discontinuities, .. } => {
                let mut pts = vec![*lo, *hi];
                pts.extend_from_slice(discontinuities);
                pts.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
                pts.dedup();
                pts.into_iter()
                    .map(|u| (u, self.eval_side(u, Side::Left), self.eval_side(u, Side::Right)))
                    .filter(|(_, l, r)| (*l - *r).abs() > T::of(1e-14))
                    .collect()
            }
            ProfileKind::LogSide { base, negative } => {
                let scale = |u: T| (u / T::of(2.0)).exp();
                base.jumps()
                    .into_iter()
                    .filter_map(|(u, l, r)| {
                        let t = if *negative { -u } else { u };
                        if t <= T::zero() {
                            return None; // jumps at t <= 0 stay out of the log chart
                        }
                        let x = t.ln();
                        // t = -e^x reverses orientation: side values swap
                        let (hl, hr) = if *negative { (r, l) } else { (l, r) };
                        Some((x, hl * scale(x), hr * scale(x)))
                    })
                    .collect()
            }
        }
    }

    fn breakpoints(&self) -> Vec<T> {
        self.jumps().into_iter().map(|(u, _, _)| u).collect()
    }
}

impl<T: Real> DensityProfile<T> {
    pub fn uniform(a: T, b: T) -> Self {
        DensityProfile { kind: ProfileKind::Uniform { a, b }, smooth_class: SmoothClass::PiecewiseC1 }
    }

    pub fn gaussian(sigma: T) -> Self {
        DensityProfile {
            kind: ProfileKind::GaussianProfile { sigma },
            smooth_class: SmoothClass::W12,
        }
    }

    /// Profile `sqrt(density)` of a real marginal.
    pub fn from_marginal(mu: &MarginalMeasure<T>) -> Result<Self> {
        match mu {
            MarginalMeasure::Gaussian { sigma, field: Field::Real } => Ok(Self::gaussian(*sigma)),
            MarginalMeasure::UniformInterval { a, b } => Ok(Self::uniform(*a, *b)),
            MarginalMeasure::GridDensity { lo, hi, values, discontinuities } => Ok(DensityProfile {
                kind: ProfileKind::Grid {
                    lo: *lo,
                    hi: *hi,
                    values: values.iter().map(|v| v.sqrt()).collect(),
                    discontinuities: discontinuities.clone(),
                },
                smooth_class: SmoothClass::PiecewiseC1,
            }),
            _ => Err(Error::UnsupportedKind("profile requires a real-line density")),
        }
    }

    pub fn eval(&self, x: T) -> T {
        self.kind.eval(x)
    }

    /// `int f^2` (1 within tolerance for well-formed profiles).
    pub fn norm2_sq(&self, cfg: &QuadConfig) -> Result<T> {
        let (lo, hi) = self.kind.support();
        if hi <= lo {
            return Ok(T::zero());
        }
        let k = &self.kind;
        integrate(|x| k.eval(x) * k.eval(x), lo, hi, &k.breakpoints(), cfg)
    }
}

/// Autocorrelation `P h(alpha) = int h(x) h(x + alpha) dx`, closed form where
/// the profile admits one.
pub fn acf<T: Real>(h: &DensityProfile<T>, alpha: T, cfg: &QuadConfig) -> Result<T> {
    match &h.kind {
        ProfileKind::Uniform { a, b } => {
            let len = *b - *a;
            Ok((len - alpha.abs()).max(T::zero()) / len)
        }
        ProfileKind::GaussianProfile { sigma } => {
            let s2 = *sigma * *sigma;
            Ok((-(alpha * alpha) / (T::of(8.0) * s2)).exp())
        }
        _ => acf_quadrature(h, alpha, cfg),
    }
}

/// Autocorrelation by adaptive quadrature (the independent route).
pub fn acf_quadrature<T: Real>(h: &DensityProfile<T>, alpha: T, cfg: &QuadConfig) -> Result<T> {
    let (slo, shi) = h.kind.support();
    if shi <= slo {
        return Ok(T::zero());
    }
    // integrand supported on supp(h) intersected with supp(h) - alpha
    let dom_lo = slo.max(slo - alpha);
    let dom_hi = shi.min(shi - alpha);
    if dom_hi <= dom_lo {
        return Ok(T::zero());
    }
    let mut breaks = h.kind.breakpoints();
    breaks.extend(h.kind.breakpoints().into_iter().map(|u| u - alpha));
    let k = &h.kind;
    integrate(|x| k.eval(x) * k.eval(x + alpha), dom_lo, dom_hi, &breaks, cfg)
}

/// `Theta(lambda) = sqrt(lambda) int f(t) f(lambda t) dt`, `lambda > 0`.
pub fn theta<T: Real>(f: &DensityProfile<T>, lambda: T, cfg: &QuadConfig) -> Result<T> {
    assert!(lambda > T::zero(), "theta requires lambda > 0");
    match &f.kind {
        ProfileKind::Uniform { a, b } => {
            let lo = a.max(*a / lambda);
            let hi = b.min(*b / lambda);
            let overlap = (hi - lo).max(T::zero());
            Ok(lambda.sqrt() * overlap / (*b - *a))
        }
        ProfileKind::GaussianProfile { .. } => {
            Ok((T::of(2.0) * lambda / (T::one() + lambda * lambda)).sqrt())
        }
        _ => theta_quadrature(f, lambda, cfg),
    }
}

/// `Theta` by quadrature.
pub fn theta_quadrature<T: Real>(
    f: &DensityProfile<T>,
    lambda: T,
    cfg: &QuadConfig,
) -> Result<T> {
    let (slo, shi) = f.kind.support();
    let dom_lo = slo.max(slo / lambda);
    let dom_hi = shi.min(shi / lambda);
    if dom_hi <= dom_lo {
        return Ok(T::zero());
    }
    let mut breaks = f.kind.breakpoints();
    breaks.extend(f.kind.breakpoints().into_iter().map(|u| u / lambda));
    let k = &f.kind;
    let v = integrate(|t| k.eval(t) * k.eval(lambda * t), dom_lo, dom_hi, &breaks, cfg)?;
    Ok(lambda.sqrt() * v)
}

/// `Psi(lambda) = sqrt(lambda) int f(lambda t) g(t) dt`: the marginal overlap
/// of the product measures built from the two profiles at scale ratio
/// `lambda`.
pub fn psi<T: Real>(
    f: &DensityProfile<T>,
    g: &DensityProfile<T>,
    lambda: T,
    cfg: &QuadConfig,
) -> Result<T> {
    assert!(lambda > T::zero(), "psi requires lambda > 0");
    if let (ProfileKind::GaussianProfile { sigma: s }, ProfileKind::GaussianProfile { sigma: sp }) =
        (&f.kind, &g.kind)
    {
        let num = T::of(2.0) * lambda * *s * *sp;
        let den = lambda * lambda * *sp * *sp + *s * *s;
        return Ok((num / den).sqrt());
    }
    let (flo, fhi) = f.kind.support();
    let (glo, ghi) = g.kind.support();
    let dom_lo = glo.max(flo / lambda);
    let dom_hi = ghi.min(fhi / lambda);
    if dom_hi <= dom_lo {
        return Ok(T::zero());
    }
    let mut breaks = g.kind.breakpoints();
    breaks.extend(f.kind.breakpoints().into_iter().map(|u| u / lambda));
    let (fk, gk) = (&f.kind, &g.kind);
    let v = integrate(|t| fk.eval(lambda * t) * gk.eval(t), dom_lo, dom_hi, &breaks, cfg)?;
    Ok(lambda.sqrt() * v)
}

/// The log-scale substitution: `h_+(x) = f(e^x) e^{x/2}` and
/// `h_-(x) = f(-e^x) e^{x/2}`, with `||h_+||^2 + ||h_-||^2 = int f^2 = 1`.
pub fn log_substitution<T: Real>(f: &DensityProfile<T>) -> (DensityProfile<T>, DensityProfile<T>) {
    let make = |negative: bool| DensityProfile {
        kind: ProfileKind::LogSide { base: Box::new(f.kind.clone()), negative },
        smooth_class: f.smooth_class,
    };
    (make(false), make(true))
}

/// One-sided derivative data of the autocorrelation at 0.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OneSidedSlopes<T> {
    /// Richardson-extrapolated `(P h)'(0+)`.
    pub right_slope: T,
    /// `-right_slope` (autocorrelations are even).
    pub left_slope: T,
    /// `-1/2 sum_k (h(u_k+) - h(u_k-))^2` over the jump list.
    pub jump_formula_value: T,
}

/// Finite-difference steps for the one-sided slopes.
pub const FD_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Estimate the one-sided slopes of `P h` at 0 and evaluate the jump formula.
pub fn one_sided_slopes<T: Real>(
    h: &DensityProfile<T>,
    cfg: &QuadConfig,
) -> Result<OneSidedSlopes<T>> {
    if h.smooth_class == SmoothClass::Unknown {
        return Err(Error::NoDiscontinuityList);
    }
    let f0 = acf(h, T::zero(), cfg)?;
    let d = |step: f64| -> Result<T> {
        let a = T::of(step);
        Ok((acf(h, a, cfg)? - f0) / a)
    };
    let d1 = d(FD_STEPS[0])?;
    let d2 = d(FD_STEPS[1])?;
    let d3 = d(FD_STEPS[2])?;
    // one-sided first-order differences with halving steps:
    // d(h) = F'(0+) + c1 h + c2 h^2 + ...
    let e1 = T::of(2.0) * d2 - d1;
    let e2 = T::of(2.0) * d3 - d2;
    let right_slope = (T::of(4.0) * e2 - e1) / T::of(3.0);

    let jumps = h.kind.jumps();
    let jump_formula_value = -T::of(0.5)
        * jumps
            .iter()
            .map(|(_, l, r)| (*r - *l) * (*r - *l))
            .sum::<T>();
    Ok(OneSidedSlopes { right_slope, left_slope: -right_slope, jump_formula_value })
}

/// Thresholds for the regime decision.
#[derive(Clone, Copy, Debug)]
pub struct AutocorrConfig {
    pub quad: QuadConfig,
    pub cert: CertConfig,
    pub stab_tol: f64,
    pub divergence_guard: f64,
}

impl Default for AutocorrConfig {
    fn default() -> Self {
        AutocorrConfig {
            quad: QuadConfig::default(),
            cert: CertConfig::default(),
            stab_tol: 1e-6,
            divergence_guard: 700.0,
        }
    }
}

/// Decide non-orthogonality of the invariant product measures built from
/// profile `f` (for the first shift) and its `a`-rescaling (for the second):
/// the criterion is quadratic (`sum (1 - lambda_n / a)^2`) for profiles with
/// square-integrable derivative and linear (`sum |1 - lambda_n / a|`) when
/// the density has a jump off the origin.
pub fn equivalence_regime<T: Real>(
    f: &DensityProfile<T>,
    u: &WeightSpec,
    v: &WeightSpec,
    a: T,
    horizon: usize,
    cfg: &AutocorrConfig,
) -> Result<Verdict> {
    let jumps = f.kind.jumps();
    let criterion = match f.smooth_class {
        SmoothClass::W12 => {
            if !jumps.is_empty() {
                return Err(Error::HypothesisViolation(
                    "profile declared W12 carries a non-empty jump list",
                ));
            }
            "quadratic"
        }
        SmoothClass::PiecewiseC1 => {
            if jumps.is_empty() {
                "quadratic"
            } else {
                "linear"
            }
        }
        SmoothClass::Unknown => {
            return Ok(Verdict::undecided(
                Rule::OverlapSeriesCriterion,
                json!({"reason": "smoothness class unknown; only piecewise-C1 profiles supported"}),
            ))
        }
    };

    let su: LogProductSeries<T> = LogProductSeries::build(u, horizon)?;
    let sv: LogProductSeries<T> = LogProductSeries::build(v, horizon)?;
    let ln_a = a.ln();
    let terms: Vec<T> = (1..=horizon)
        .map(|n| {
            let dev = T::one() - (su.log(n) - sv.log(n) - ln_a).exp();
            if criterion == "linear" {
                dev.abs()
            } else {
                dev * dev
            }
        })
        .collect();
    let cert = certify_terms(&terms, &cfg.cert);

    // cross-validate the local model 1 - Theta(lambda) against the series
    // terms at a few sampled indices
    let mut model_ratios: Vec<f64> = Vec::new();
    for &frac in &[0.5f64, 0.75, 1.0] {
        let n = ((horizon as f64 * frac) as usize).max(1);
        let lam = (su.log(n) - sv.log(n) - ln_a).exp();
        if (lam - T::one()).abs() > T::of(1e-9) && (lam - T::one()).abs() < T::of(0.5) {
            if let Ok(th) = theta(f, lam, &cfg.quad) {
                let dev = T::one() - lam;
                let local = match criterion {
                    "linear" => dev.abs(),
                    _ => dev * dev,
                };
                if local > T::zero() {
                    model_ratios.push(((T::one() - th) / local).as_f64());
                }
            }
        }
    }

    let evidence = json!({
        "criterion": criterion,
        "partial_sum": cert.partial_sum.as_f64(),
        "series_status": format!("{:?}", cert.status),
        "local_model_ratios": model_ratios,
    });
    Ok(match cert.status {
        SeriesStatus::Converges => Verdict::established(Rule::OverlapSeriesCriterion, evidence),
        SeriesStatus::Diverges => Verdict::refuted(Rule::OverlapSeriesCriterion, evidence),
        SeriesStatus::Undecided => Verdict::undecided(Rule::OverlapSeriesCriterion, evidence),
    })
}

/// Result of the limit-scale detection.
#[derive(Clone, Debug)]
pub struct LimitScale<T> {
    pub a_hat: Verdict,
    pub a_value: Option<T>,
    /// Sup-norm residual between `q` and `a p(a .)` on the sampled grid.
    pub density_match: T,
}

/// Detect the limit `a` of the product ratio and check `q(t) = a p(a t)`:
/// both must hold for the product measures built from `p` and `q` to be
/// non-orthogonal.
pub fn limit_scale_detect<T: Real>(
    u: &WeightSpec,
    v: &WeightSpec,
    f: &DensityProfile<T>,
    g: &DensityProfile<T>,
    horizon: usize,
    cfg: &AutocorrConfig,
) -> Result<LimitScale<T>> {
    let su: LogProductSeries<T> = LogProductSeries::build(u, horizon)?;
    let sv: LogProductSeries<T> = LogProductSeries::build(v, horizon)?;
    let logs: Vec<T> = (1..=horizon).map(|n| su.log(n) - sv.log(n)).collect();
    let detection = detect_log_limit(&logs, cfg.stab_tol, cfg.divergence_guard);

    let (a_hat, a_value) = match detection {
        LimitDetection::Limit(l) => (
            Verdict::established(Rule::LimitScale, json!({"a_hat": l.as_f64()})),
            Some(l),
        ),
        LimitDetection::Diverged { last } => (
            Verdict::refuted(
                Rule::LimitScale,
                json!({"reason": "ratio escapes to 0 or infinity",
                       "lambda_log_last": last.as_f64()}),
            ),
            None,
        ),
        LimitDetection::Unresolved => (
            Verdict::undecided(Rule::LimitScale, json!({"horizon": horizon})),
            None,
        ),
    };

    let density_match = match a_value {
        Some(a) => {
            let (lo, hi) = g.kind.support();
            let mut worst = T::zero();
            let n_pts = 512;
            // sample cell midpoints: support edges are genuine discontinuity
            // points where any rounding of `a` flips the indicator
            for i in 0..n_pts {
                let frac = (T::of_usize(i) + T::of(0.5)) / T::of_usize(n_pts);
                let t = lo + (hi - lo) * frac;
                let q = g.eval(t) * g.eval(t);
                let p_scaled = a * f.eval(a * t) * f.eval(a * t);
                worst = worst.max((q - p_scaled).abs());
            }
            worst
        }
        None => T::infinity(),
    };

    Ok(LimitScale { a_hat, a_value, density_match })
}

#[cfg(test)]
mod tests;
