//! Scalar abstraction for the numeric core.
//!
//! Everything numeric in this crate is generic over [`Real`], which is
//! implemented for `f32` and `f64`. The crate root exposes `f64` aliases for
//! the common case; `f32` instantiations are mainly useful for quick scans
//! (the shipped tolerances assume `f64` precision).

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar used throughout the numeric core.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` constant. Panics only for values outside the target
    /// type's range, which never happens for the constants used here.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in target float")
    }

    /// Convert a `usize` index.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("index representable in target float")
    }

    /// Lossy view as `f64` (exact for `f64`, widening for `f32`).
    fn as_f64(self) -> f64 {
        self.to_f64().expect("float converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Stable `ln(exp(a) + exp(b))`.
pub fn log_add_exp<T: Real>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(2x / (1 + x^2))` for `x = exp(log_x)`, stable for log-ratios of any
/// magnitude. This is the log of the scale-balance factor appearing in the
/// Gaussian overlap formulas; it never overflows even for |log_x| in the
/// hundreds.
pub fn ln_balance_from_log<T: Real>(log_x: T) -> T {
    // ln(2x/(1+x^2)) = ln 2 + ln x - ln(1 + x^2)
    //               = ln 2 + log_x - logaddexp(0, 2 log_x)
    T::LN_2() + log_x - log_add_exp(T::zero(), log_x + log_x)
}

/// Relative difference |a - b| / max(1, |a|, |b|).
pub fn rel_diff<T: Real>(a: T, b: T) -> T {
    let scale = T::one().max(a.abs()).max(b.abs());
    (a - b).abs() / scale
}
