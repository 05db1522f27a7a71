//! Invariant product measures for weighted shifts.
//!
//! A product measure `mu = mu_0 x mu_1 x ...` on the sequence space is
//! invariant under the shift with weights `w` exactly when each `mu_n` is the
//! pushforward of `mu_0` under `t -> t / (w_1 .. w_n)`. Four closed marginal
//! families are supported (Gaussian, uniform interval, discrete with non-zero
//! support, gridded density); they are closed under the scaling pushforward
//! and admit exact tail probabilities, absolute moments, and samplers.
//!
//! Complex scalars use the rotation-invariant Gaussian convention: variance
//! `sigma^2` per real coordinate, so `E |xi|^2 = 2 sigma^2` when the field is
//! complex.

use num_complex::Complex;
use rand::distributions::uniform::SampleUniform;
use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cert::{certify_log_terms, certify_terms, SeriesStatus};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::rngutil::stream_rng;
use crate::special::{erfc_t, gamma_t};
use crate::verdict::{Rule, Verdict};
use crate::weights::{
    summability_from_series, EpsilonSeq, Field, LogProductSeries, SummabilityVerdict, WeightSpec,
    WeightsConfig,
};

/// Sampling-capable scalar bound (`f32` / `f64`).
pub trait SampleReal: Real + SampleUniform {}
impl SampleReal for f32 {}
impl SampleReal for f64 {}

/// A one-dimensional probability law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "snake_case",
    bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>")
)]
pub enum MarginalMeasure<T> {
    /// Centered Gaussian with covariance `sigma^2 I` over the field.
    Gaussian { sigma: T, field: Field },
    /// Uniform law on `[a, b]`.
    UniformInterval { a: T, b: T },
    /// Purely atomic law on non-zero points.
    DiscreteGroup { support: Vec<T>, weights: Vec<T> },
    /// Piecewise-constant density on a uniform partition of `[lo, hi]`,
    /// with the genuine discontinuity points listed separately.
    GridDensity {
        lo: T,
        hi: T,
        values: Vec<T>,
        #[serde(default)]
        discontinuities: Vec<T>,
    },
}

impl<T: Real> MarginalMeasure<T> {
    pub fn gaussian(sigma: T, field: Field) -> Self {
        MarginalMeasure::Gaussian { sigma, field }
    }

    pub fn uniform(a: T, b: T) -> Self {
        MarginalMeasure::UniformInterval { a, b }
    }

    pub fn discrete(support: Vec<T>, weights: Vec<T>) -> Self {
        MarginalMeasure::DiscreteGroup { support, weights }
    }

    /// Check the structural invariants: unit mass within 1e-10, positive
    /// atom weights, non-negative densities, non-zero discrete support.
    // negated comparisons are deliberate: they also reject NaN bounds
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        match self {
            MarginalMeasure::Gaussian { sigma, .. } => {
                if *sigma <= T::zero() {
                    return Err(Error::ConfigError("gaussian sigma must be positive".into()));
                }
            }
            MarginalMeasure::UniformInterval { a, b } => {
                if !(a < b) {
                    return Err(Error::ConfigError("uniform interval requires a < b".into()));
                }
            }
            MarginalMeasure::DiscreteGroup { support, weights } => {
                if support.len() != weights.len() || support.is_empty() {
                    return Err(Error::ConfigError(
                        "discrete support and weights must match and be non-empty".into(),
                    ));
                }
                if support.iter().any(|s| *s == T::zero()) {
                    return Err(Error::SupportContainsZero);
                }
                if weights.iter().any(|w| *w <= T::zero()) {
                    return Err(Error::ConfigError("discrete weights must be positive".into()));
                }
            }
            MarginalMeasure::GridDensity { lo, hi, values, .. } => {
                if !(lo < hi) || values.is_empty() {
                    return Err(Error::ConfigError("grid density requires lo < hi and cells".into()));
                }
                if values.iter().any(|v| *v < T::zero()) {
                    return Err(Error::ConfigError("grid density values must be >= 0".into()));
                }
            }
        }
        let mass = self.total_mass();
        if (mass - T::one()).abs() > T::of(1e-10) {
            return Err(Error::ConfigError(format!(
                "total mass {mass} deviates from 1 beyond 1e-10"
            )));
        }
        Ok(())
    }

    /// Total mass (1 by construction for the closed-form kinds; the grid and
    /// discrete kinds carry it explicitly).
    pub fn total_mass(&self) -> T {
        match self {
            MarginalMeasure::Gaussian { .. } | MarginalMeasure::UniformInterval { .. } => T::one(),
            MarginalMeasure::DiscreteGroup { weights, .. } => weights.iter().cloned().sum(),
            MarginalMeasure::GridDensity { lo, hi, values, .. } => {
                let width = (*hi - *lo) / T::of_usize(values.len());
                values.iter().cloned().sum::<T>() * width
            }
        }
    }

    /// Whether the law charges the singleton `{0}`. All four families keep it
    /// at mass zero (continuous kinds trivially, the discrete kind excludes
    /// zero from its support); the flag exists so callers can guard the
    /// orthogonality definition explicitly.
    pub fn charges_zero(&self) -> bool {
        false
    }

    /// Real dimension of the underlying field.
    pub fn field_dim(&self) -> usize {
        match self {
            MarginalMeasure::Gaussian { field, .. } => field.dim(),
            _ => 1,
        }
    }

    /// Pushforward under `t -> s t` for `s > 0`.
    pub fn scaled(&self, s: T) -> Self {
        match self {
            MarginalMeasure::Gaussian { sigma, field } => {
                MarginalMeasure::Gaussian { sigma: *sigma * s, field: *field }
            }
            MarginalMeasure::UniformInterval { a, b } => {
                MarginalMeasure::UniformInterval { a: *a * s, b: *b * s }
            }
            MarginalMeasure::DiscreteGroup { support, weights } => MarginalMeasure::DiscreteGroup {
                support: support.iter().map(|x| *x * s).collect(),
                weights: weights.clone(),
            },
            MarginalMeasure::GridDensity { lo, hi, values, discontinuities } => {
                MarginalMeasure::GridDensity {
                    lo: *lo * s,
                    hi: *hi * s,
                    values: values.iter().map(|v| *v / s).collect(),
                    discontinuities: discontinuities.iter().map(|u| *u * s).collect(),
                }
            }
        }
    }

    /// `E |t|^p`.
    pub fn moment_abs(&self, p: T) -> Result<T> {
        let value = match self {
            MarginalMeasure::Gaussian { sigma, field } => {
                let pf = p;
                match field {
                    // E|t|^p = sigma^p 2^{p/2} Gamma((p+1)/2) / sqrt(pi)
                    Field::Real => {
                        sigma.powf(pf) * T::of(2.0).powf(pf / T::of(2.0))
                            * gamma_t((pf + T::one()) / T::of(2.0))
                            / T::PI().sqrt()
                    }
                    // |t| is Rayleigh(sigma): E|t|^p = sigma^p 2^{p/2} Gamma(p/2 + 1)
                    Field::Complex => {
                        sigma.powf(pf) * T::of(2.0).powf(pf / T::of(2.0))
                            * gamma_t(pf / T::of(2.0) + T::one())
                    }
                }
            }
            MarginalMeasure::UniformInterval { a, b } => {
                abs_power_integral(*a, *b, p) / (*b - *a)
            }
            MarginalMeasure::DiscreteGroup { support, weights } => support
                .iter()
                .zip(weights)
                .map(|(s, w)| s.abs().powf(p) * *w)
                .sum(),
            MarginalMeasure::GridDensity { lo, hi, values, .. } => {
                let width = (*hi - *lo) / T::of_usize(values.len());
                values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let c0 = *lo + width * T::of_usize(i);
                        *v * abs_power_integral(c0, c0 + width, p)
                    })
                    .sum()
            }
        };
        if !value.is_finite() {
            return Err(Error::InfiniteMoment(p.as_f64()));
        }
        Ok(value)
    }

    /// `mu(|t| > x)` via closed-form tails.
    pub fn tail_prob(&self, x: T) -> T {
        if x < T::zero() {
            return T::one();
        }
        if x == T::infinity() {
            return T::zero();
        }
        match self {
            MarginalMeasure::Gaussian { sigma, field } => match field {
                Field::Real => erfc_t(x / (*sigma * T::of(2.0).sqrt())),
                Field::Complex => (-(x * x) / (T::of(2.0) * *sigma * *sigma)).exp(),
            },
            MarginalMeasure::UniformInterval { a, b } => {
                let len = interval_overlap_outside_ball(*a, *b, x);
                len / (*b - *a)
            }
            MarginalMeasure::DiscreteGroup { support, weights } => support
                .iter()
                .zip(weights)
                .filter(|(s, _)| s.abs() > x)
                .map(|(_, w)| *w)
                .sum(),
            MarginalMeasure::GridDensity { lo, hi, values, .. } => {
                let width = (*hi - *lo) / T::of_usize(values.len());
                values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let c0 = *lo + width * T::of_usize(i);
                        *v * interval_overlap_outside_ball(c0, c0 + width, x)
                    })
                    .sum()
            }
        }
    }

    /// Real-line density at `t` (None for the atomic kind and for complex
    /// Gaussians, whose density lives on the plane).
    pub fn density(&self, t: T) -> Option<T> {
        match self {
            MarginalMeasure::Gaussian { sigma, field } => match field {
                Field::Real => {
                    let s2 = *sigma * *sigma;
                    Some(
                        (-(t * t) / (T::of(2.0) * s2)).exp()
                            / (T::of(2.0) * T::PI() * s2).sqrt(),
                    )
                }
                Field::Complex => None,
            },
            MarginalMeasure::UniformInterval { a, b } => {
                Some(if t >= *a && t <= *b { T::one() / (*b - *a) } else { T::zero() })
            }
            MarginalMeasure::DiscreteGroup { .. } => None,
            MarginalMeasure::GridDensity { lo, hi, values, .. } => {
                if t < *lo || t > *hi {
                    return Some(T::zero());
                }
                let width = (*hi - *lo) / T::of_usize(values.len());
                let idx = ((t - *lo) / width).floor().to_usize().unwrap_or(0);
                Some(values[idx.min(values.len() - 1)])
            }
        }
    }

    /// Effective support bounds for quadrature (Gaussians truncated where the
    /// density is below 1e-18 of its peak).
    pub fn support_bounds(&self) -> (T, T) {
        match self {
            MarginalMeasure::Gaussian { sigma, .. } => {
                let r = *sigma * T::of(10.0);
                (-r, r)
            }
            MarginalMeasure::UniformInterval { a, b } => (*a, *b),
            MarginalMeasure::DiscreteGroup { support, .. } => {
                let lo = support.iter().cloned().fold(T::infinity(), T::min);
                let hi = support.iter().cloned().fold(T::neg_infinity(), T::max);
                (lo, hi)
            }
            MarginalMeasure::GridDensity { lo, hi, .. } => (*lo, *hi),
        }
    }

    /// Density breakpoints (support edges plus declared discontinuities).
    pub fn breakpoints(&self) -> Vec<T> {
        match self {
            MarginalMeasure::Gaussian { .. } => vec![],
            MarginalMeasure::UniformInterval { a, b } => vec![*a, *b],
            MarginalMeasure::DiscreteGroup { support, .. } => support.clone(),
            MarginalMeasure::GridDensity { lo, hi, discontinuities, .. } => {
                let mut out = vec![*lo, *hi];
                out.extend_from_slice(discontinuities);
                out
            }
        }
    }

    /// Mass assigned to the interval `[a, b]` (exact for the grid kind).
    pub fn interval_mass(&self, a: T, b: T) -> T {
        if b <= a {
            return T::zero();
        }
        match self {
            MarginalMeasure::Gaussian { sigma, field } => match field {
                Field::Real => {
                    let s = *sigma * T::of(2.0).sqrt();
                    (erfc_t(a / s) - erfc_t(b / s)) / T::of(2.0)
                }
                Field::Complex => T::zero(),
            },
            MarginalMeasure::UniformInterval { a: la, b: lb } => {
                let lo = a.max(*la);
                let hi = b.min(*lb);
                ((hi - lo).max(T::zero())) / (*lb - *la)
            }
            MarginalMeasure::DiscreteGroup { support, weights } => support
                .iter()
                .zip(weights)
                .filter(|(s, _)| **s >= a && **s <= b)
                .map(|(_, w)| *w)
                .sum(),
            MarginalMeasure::GridDensity { lo, hi, values, .. } => {
                let width = (*hi - *lo) / T::of_usize(values.len());
                let mut acc = T::zero();
                for (i, v) in values.iter().enumerate() {
                    let c0 = *lo + width * T::of_usize(i);
                    let c1 = c0 + width;
                    let o_lo = a.max(c0);
                    let o_hi = b.min(c1);
                    if o_hi > o_lo {
                        acc += *v * (o_hi - o_lo);
                    }
                }
                acc
            }
        }
    }

    /// Law of `omega * xi` with `omega` uniform on the unimodular scalars of
    /// the field: sign symmetrization over the reals, rotation invariance
    /// over the complexes. Exact for Gaussians (unchanged); discrete supports
    /// reflect; interval and grid laws become symmetric gridded densities
    /// with exactly conserved mass.
    pub fn symmetrize_phase(&self, field: Field) -> Result<Self> {
        match self {
            MarginalMeasure::Gaussian { .. } => Ok(self.clone()),
            _ if field == Field::Complex => Err(Error::UnsupportedKind(
                "rotation-invariant law of a non-Gaussian marginal is not representable",
            )),
            MarginalMeasure::DiscreteGroup { support, weights } => {
                let mut pairs: Vec<(T, T)> = Vec::with_capacity(support.len() * 2);
                let half = T::of(0.5);
                for (s, w) in support.iter().zip(weights) {
                    pairs.push((*s, *w * half));
                    pairs.push((-*s, *w * half));
                }
                pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite support"));
                let mut supp = Vec::new();
                let mut wts: Vec<T> = Vec::new();
                for (s, w) in pairs {
                    if supp.last() == Some(&s) {
                        let last = wts.last_mut().unwrap();
                        *last += w;
                    } else {
                        supp.push(s);
                        wts.push(w);
                    }
                }
                Ok(MarginalMeasure::DiscreteGroup { support: supp, weights: wts })
            }
            MarginalMeasure::UniformInterval { a, b } => {
                Ok(symmetrized_grid(self, *a, *b, &[*a, *b], 4096))
            }
            MarginalMeasure::GridDensity { lo, hi, discontinuities, values } => {
                let mut breaks = vec![*lo, *hi];
                breaks.extend_from_slice(discontinuities);
                Ok(symmetrized_grid(self, *lo, *hi, &breaks, values.len().max(1024)))
            }
        }
    }

    /// Kind-level mutual absolute continuity (used by the product dichotomy
    /// to upgrade "non-orthogonal" to "equivalent").
    pub fn mutually_ac_with(&self, other: &Self) -> bool {
        matches!(
            (self, other),
            (
                MarginalMeasure::Gaussian { field: f1, .. },
                MarginalMeasure::Gaussian { field: f2, .. }
            ) if f1 == f2
        )
    }
}

/// `int_a^b |t|^p dt` for `b > a`.
fn abs_power_integral<T: Real>(a: T, b: T, p: T) -> T {
    let prim = |t: T| {
        let q = p + T::one();
        t.signum() * t.abs().powf(q) / q
    };
    prim(b) - prim(a)
}

/// Length of `[a, b] \ [-x, x]`.
fn interval_overlap_outside_ball<T: Real>(a: T, b: T, x: T) -> T {
    let right = (b - a.max(x)).max(T::zero());
    let left = ((-x).min(b) - a).max(T::zero());
    right + left
}

/// Build the sign-symmetrized law of a real measure as a symmetric gridded
/// density, conserving mass cell by cell.
fn symmetrized_grid<T: Real>(
    mu: &MarginalMeasure<T>,
    lo: T,
    hi: T,
    breaks: &[T],
    n_cells: usize,
) -> MarginalMeasure<T> {
    let m = lo.abs().max(hi.abs());
    let n = n_cells.max(16);
    let width = (m + m) / T::of_usize(n);
    let half = T::of(0.5);
    let values: Vec<T> = (0..n)
        .map(|i| {
            let c0 = -m + width * T::of_usize(i);
            let c1 = c0 + width;
            let mass = (mu.interval_mass(c0, c1) + mu.interval_mass(-c1, -c0)) * half;
            mass / width
        })
        .collect();
    let mut disc: Vec<T> = breaks
        .iter()
        .flat_map(|u| [*u, -*u])
        .filter(|u| u.abs() <= m)
        .collect();
    disc.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    disc.dedup();
    MarginalMeasure::GridDensity { lo: -m, hi: m, values, discontinuities: disc }
}

/// A `mu_0` together with a weight spec: the invariant product measure whose
/// n-th marginal is `mu_0` pushed forward by `t -> t / (w_1 .. w_n)`.
#[derive(Clone, Debug)]
pub struct InvariantProductMeasure<T> {
    mu0: MarginalMeasure<T>,
    spec: WeightSpec,
    p: T,
    series: LogProductSeries<T>,
}

/// Both sides of the absolute-moment identity for the product measure.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MomentIdentity<T> {
    /// `E|s|^p (1 + sum_{n <= horizon} exp(-p L_n))`.
    pub lhs_truncated: T,
    /// Closed form (exact geometric sum where available, else the truncated
    /// sum plus its certified tail).
    pub rhs_closed: T,
    /// Certified bound on the truncation gap.
    pub tail_bound: T,
}

impl<T: SampleReal> InvariantProductMeasure<T>
where
    StandardNormal: Distribution<T>,
{
    /// Draw one truncated sample `(xi_0, xi_1 e^{-L_1}, ..., xi_N e^{-L_N})`
    /// (phases applied for complex weights) from the given stream.
    pub fn sample_with<R: Rng>(&self, truncation: usize, rng: &mut R) -> Result<Vec<Complex<T>>> {
        if truncation > self.series.horizon() {
            return Err(Error::HorizonExceeded(truncation));
        }
        let mut out = Vec::with_capacity(truncation + 1);
        for n in 0..=truncation {
            let xi = self.sample_marginal0(rng);
            let scale = (-self.series.log(n)).exp();
            out.push(self.series.unit(n).conj() * xi * scale);
        }
        Ok(out)
    }

    /// Deterministic seeded sample.
    pub fn sample(&self, truncation: usize, seed: u64) -> Result<Vec<Complex<T>>> {
        self.ensure_summable()?;
        self.sample_with(truncation, &mut stream_rng(seed, 0))
    }

    /// `count` independent samples, deterministic per `(seed, index)` and
    /// independent of thread count.
    pub fn sample_many(
        &self,
        count: usize,
        truncation: usize,
        seed: u64,
    ) -> Result<Vec<Vec<Complex<T>>>> {
        self.ensure_summable()?;
        (0..count)
            .into_par_iter()
            .map(|i| self.sample_with(truncation, &mut stream_rng(seed, i as u64 + 1)))
            .collect()
    }

    /// One draw from `mu_0`.
    fn sample_marginal0<R: Rng>(&self, rng: &mut R) -> Complex<T> {
        sample_marginal(&self.mu0, rng)
    }
}

/// One draw from a marginal law.
pub fn sample_marginal<T: SampleReal, R: Rng>(
    mu: &MarginalMeasure<T>,
    rng: &mut R,
) -> Complex<T>
where
    StandardNormal: Distribution<T>,
{
    match mu {
        MarginalMeasure::Gaussian { sigma, field } => match field {
            Field::Real => {
                let z: T = rng.sample(StandardNormal);
                Complex::new(z * *sigma, T::zero())
            }
            Field::Complex => {
                let re: T = rng.sample(StandardNormal);
                let im: T = rng.sample(StandardNormal);
                Complex::new(re * *sigma, im * *sigma)
            }
        },
        MarginalMeasure::UniformInterval { a, b } => {
            let u = Uniform::new_inclusive(*a, *b).sample(rng);
            Complex::new(u, T::zero())
        }
        MarginalMeasure::DiscreteGroup { support, weights } => {
            let total: T = weights.iter().cloned().sum();
            let mut u: T = Uniform::new(T::zero(), total).sample(rng);
            for (s, w) in support.iter().zip(weights) {
                if u < *w {
                    return Complex::new(*s, T::zero());
                }
                u -= *w;
            }
            Complex::new(*support.last().unwrap(), T::zero())
        }
        MarginalMeasure::GridDensity { lo, hi, values, .. } => {
            let width = (*hi - *lo) / T::of_usize(values.len());
            let total: T = values.iter().cloned().sum::<T>() * width;
            let mut u: T = Uniform::new(T::zero(), total).sample(rng);
            for (i, v) in values.iter().enumerate() {
                let mass = *v * width;
                if u < mass && mass > T::zero() {
                    let c0 = *lo + width * T::of_usize(i);
                    let frac = u / mass;
                    return Complex::new(c0 + width * frac, T::zero());
                }
                u -= mass;
            }
            Complex::new(*hi, T::zero())
        }
    }
}

impl<T: Real> InvariantProductMeasure<T> {
    /// Attach `mu_0` to a weight spec at ambient exponent `p`, precomputing
    /// the log-products up to `horizon`.
    pub fn new(
        mu0: MarginalMeasure<T>,
        spec: WeightSpec,
        p: T,
        horizon: usize,
    ) -> Result<Self> {
        mu0.validate()?;
        spec.validate()?;
        if spec.field == Field::Complex && !matches!(mu0, MarginalMeasure::Gaussian { .. }) {
            return Err(Error::UnsupportedKind(
                "complex-field product measures require Gaussian marginals",
            ));
        }
        let series = LogProductSeries::build(&spec, horizon)?;
        Ok(InvariantProductMeasure { mu0, spec, p, series })
    }

    pub fn mu0(&self) -> &MarginalMeasure<T> {
        &self.mu0
    }

    pub fn spec(&self) -> &WeightSpec {
        &self.spec
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn series(&self) -> &LogProductSeries<T> {
        &self.series
    }

    pub fn horizon(&self) -> usize {
        self.series.horizon()
    }

    /// The n-th marginal: `mu_0` scaled by `exp(-L_n)`.
    pub fn marginal_at(&self, n: usize) -> Result<MarginalMeasure<T>> {
        if n > self.series.horizon() {
            return Err(Error::HorizonExceeded(n));
        }
        if n == 0 {
            return Ok(self.mu0.clone());
        }
        Ok(self.mu0.scaled((-self.series.log(n)).exp()))
    }

    /// Reciprocal-product summability at the ambient exponent.
    pub fn summability(&self, cfg: &WeightsConfig) -> SummabilityVerdict<T> {
        summability_from_series(&self.spec, &self.series, self.p, cfg)
    }

    fn ensure_summable(&self) -> Result<()> {
        let s = self.summability(&WeightsConfig::default());
        match s.status {
            SeriesStatus::Converges => Ok(()),
            SeriesStatus::Diverges => Err(Error::NotSummable("Diverges")),
            SeriesStatus::Undecided => Err(Error::NotSummable("Undecided")),
        }
    }

    /// Both sides of `int sum |t_n|^p dmu = E|s|^p (1 + S_p)`, certifying
    /// the measure sits on `l_p` with unit mass.
    pub fn moment_identity(&self, cfg: &WeightsConfig) -> Result<MomentIdentity<T>> {
        let moment = self.mu0.moment_abs(self.p)?;
        let summ = self.summability(cfg);
        if summ.status != SeriesStatus::Converges {
            return Err(Error::NotSummable(match summ.status {
                SeriesStatus::Diverges => "Diverges",
                _ => "Undecided",
            }));
        }
        let lhs = moment * (T::one() + summ.partial_sum);
        // exact geometric closed form when the log-products are exactly linear
        let rhs = match self.spec.tail_structure() {
            Some(ts) if ts.rho_bound == 0.0 && ts.gamma > 0.0 => {
                let q = T::of((-self.p.as_f64() * ts.gamma).exp());
                moment * (T::one() + q / (T::one() - q))
            }
            _ => moment * (T::one() + summ.partial_sum + summ.tail_bound.unwrap_or(T::zero())),
        };
        let tail = moment * summ.tail_bound.unwrap_or(T::zero());
        Ok(MomentIdentity { lhs_truncated: lhs, rhs_closed: rhs, tail_bound: tail })
    }

    /// Smallest truncation whose certified `l_p` tail of the scale series is
    /// below `target` (default sampling truncation rule).
    pub fn default_truncation(&self, target: T, cfg: &WeightsConfig) -> Result<usize> {
        let summ = self.summability(cfg);
        if summ.status != SeriesStatus::Converges {
            return Err(Error::NotSummable(match summ.status {
                SeriesStatus::Diverges => "Diverges",
                _ => "Undecided",
            }));
        }
        let horizon = self.series.horizon();
        // suffix sums of exp(-p L_n)
        let mut suffix = summ.tail_bound.unwrap_or(T::zero());
        let mut best = horizon;
        for n in (1..=horizon).rev() {
            suffix += (-self.p * self.series.log(n)).exp();
            if suffix <= target {
                best = n - 1;
            } else {
                break;
            }
        }
        Ok(best)
    }
}

/// Tail-probability test for unit mass on `l_1`: if some summable positive
/// `(eps_n)` makes `sum_n mu_0(|t| > |w_1..w_n| eps_n)` summable, the product
/// measure concentrates on `l_1`.
pub fn ell1_support_test<T: Real>(
    mu0: &MarginalMeasure<T>,
    spec: &WeightSpec,
    epsilons: &EpsilonSeq,
    horizon: usize,
    cfg: &WeightsConfig,
) -> Result<Verdict> {
    mu0.validate()?;
    // precondition: the epsilon series itself must certify summable
    let eps_logs: Vec<T> = (1..=horizon)
        .map(|n| epsilons.ln_eval(n).map(T::of))
        .collect::<Result<_>>()?;
    let eps_cert = certify_log_terms(&eps_logs, &cfg.cert);
    if eps_cert.status != SeriesStatus::Converges {
        return Err(Error::ConfigError(
            "epsilon sequence is not certified summable at this horizon".into(),
        ));
    }

    // thresholds |w_1..w_n| eps_n evaluated in log scale: the products
    // overflow raw arithmetic long before the horizon
    let series: LogProductSeries<T> = LogProductSeries::build(spec, horizon)?;
    let terms: Vec<T> = (1..=horizon)
        .map(|n| mu0.tail_prob((series.log(n) + eps_logs[n - 1]).exp()))
        .collect();
    let cert = certify_terms(&terms, &cfg.cert);
    let evidence = serde_json::json!({
        "partial_sum": cert.partial_sum.as_f64(),
        "rule": serde_json::to_value(cert.rule).unwrap_or(serde_json::Value::Null),
        "horizon": horizon,
    });
    Ok(match cert.status {
        SeriesStatus::Converges => Verdict::established(Rule::TailSeriesSummable, evidence),
        _ => Verdict::undecided(Rule::TailSeriesSummable, evidence),
    })
}

#[cfg(test)]
mod tests;
