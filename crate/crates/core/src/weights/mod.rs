//! Weight sequences and the criteria expressible through their partial
//! products.

pub mod criteria;
pub mod series;
pub mod spec;

pub use criteria::{
    apply_shift_power, classify, exact_reciprocal_products, fixed_point, lp_norm, shift_exact,
    summability, summability_certificate_check, summability_from_series, Classification,
    FixedPointVector, SummabilityVerdict, WeightsConfig, DEFAULT_HORIZON,
};
pub use series::LogProductSeries;
pub use spec::{EpsilonSeq, ExceptionGen, FamilyValue, Field, TailStructure, WeightKind, WeightSpec};

use crate::error::Result;
use crate::real::Real;
use crate::scalar::SpecScalar;

/// Evaluate `w_n` (n >= 1), exactly per the spec's rule.
pub fn eval_weight(spec: &WeightSpec, n: usize) -> Result<SpecScalar> {
    spec.eval(n)
}

/// Cumulative log-moduli (and phases) of `w_1 .. w_n` for `n = 0..=horizon`.
pub fn log_products<T: Real>(spec: &WeightSpec, horizon: usize) -> Result<LogProductSeries<T>> {
    LogProductSeries::build(spec, horizon)
}
