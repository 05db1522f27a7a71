//! Weight scalars.
//!
//! Weight sequences are described symbolically and evaluated on demand. A
//! scalar value is kept in exact rational form whenever possible (every finite
//! `f64` is a dyadic rational, and rational inputs may also be given as
//! numerator/denominator pairs), falling back to an `f64` complex pair
//! otherwise. The exact representation is what makes the telescoping identity
//! checks (shared periodic points, fixed-point residuals, eventually-constant
//! ratios) decidable instead of tolerance-based.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::real::Real;

/// Exact rational from a finite `f64`. Exact: no rounding is involved.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(BigRational::zero());
    }
    let (mantissa, exponent, sign) = Float::integer_decode(x);
    let mut numer = BigInt::from(mantissa);
    if sign < 0 {
        numer = -numer;
    }
    Some(if exponent >= 0 {
        BigRational::from_integer(numer << (exponent as usize))
    } else {
        BigRational::new(numer, BigInt::one() << ((-exponent) as usize))
    })
}

/// `f64` value of a rational, None if it does not round-trip exactly.
fn exact_f64_of_rational(r: &BigRational) -> Option<f64> {
    let x = r.to_f64()?;
    if !x.is_finite() {
        return None;
    }
    (rational_from_f64(x).as_ref() == Some(r)).then_some(x)
}

/// A weight value: exact rational when the spec pins it down exactly,
/// complex `f64` pair otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecScalar {
    Rational(BigRational),
    Complex { re: f64, im: f64 },
}

impl SpecScalar {
    pub fn from_f64(x: f64) -> Self {
        match rational_from_f64(x) {
            Some(r) => SpecScalar::Rational(r),
            None => SpecScalar::Complex { re: x, im: 0.0 },
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        SpecScalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        SpecScalar::Rational(r)
    }

    /// Complex input; a vanishing imaginary part collapses to the exact form.
    pub fn complex(re: f64, im: f64) -> Self {
        if im == 0.0 {
            Self::from_f64(re)
        } else {
            SpecScalar::Complex { re, im }
        }
    }

    pub fn one() -> Self {
        SpecScalar::Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SpecScalar::Rational(r) => r.is_zero(),
            SpecScalar::Complex { re, im } => *re == 0.0 && *im == 0.0,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, SpecScalar::Rational(_))
            || matches!(self, SpecScalar::Complex { im, .. } if *im == 0.0)
    }

    /// Exact rational view, when available.
    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            SpecScalar::Rational(r) => Some(r),
            SpecScalar::Complex { .. } => None,
        }
    }

    pub fn modulus_f64(&self) -> f64 {
        match self {
            SpecScalar::Rational(r) => r.to_f64().unwrap_or(f64::INFINITY).abs(),
            SpecScalar::Complex { re, im } => re.hypot(*im),
        }
    }

    /// Natural log of the modulus.
    pub fn ln_modulus<T: Real>(&self) -> T {
        T::of(self.modulus_f64().ln())
    }

    /// Argument in (-pi, pi]; 0 or pi exactly for rationals.
    pub fn arg_f64(&self) -> f64 {
        match self {
            SpecScalar::Rational(r) => {
                if r.is_negative() {
                    std::f64::consts::PI
                } else {
                    0.0
                }
            }
            SpecScalar::Complex { re, im } => im.atan2(*re),
        }
    }

    /// True for a strictly negative real value.
    pub fn is_negative_real(&self) -> bool {
        match self {
            SpecScalar::Rational(r) => r.is_negative(),
            SpecScalar::Complex { re, im } => *im == 0.0 && *re < 0.0,
        }
    }

    pub fn to_complex<T: Real>(&self) -> Complex<T> {
        match self {
            SpecScalar::Rational(r) => Complex::new(T::of(r.to_f64().unwrap_or(f64::NAN)), T::zero()),
            SpecScalar::Complex { re, im } => Complex::new(T::of(*re), T::of(*im)),
        }
    }

    pub fn mul(&self, other: &SpecScalar) -> SpecScalar {
        match (self, other) {
            (SpecScalar::Rational(a), SpecScalar::Rational(b)) => SpecScalar::Rational(a * b),
            _ => {
                let a = self.to_complex::<f64>();
                let b = other.to_complex::<f64>();
                SpecScalar::complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)
            }
        }
    }

    pub fn div(&self, other: &SpecScalar) -> SpecScalar {
        match (self, other) {
            (SpecScalar::Rational(a), SpecScalar::Rational(b)) if !b.is_zero() => {
                SpecScalar::Rational(a / b)
            }
            _ => {
                let q = self.to_complex::<f64>() / other.to_complex::<f64>();
                SpecScalar::complex(q.re, q.im)
            }
        }
    }
}

impl Serialize for SpecScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            SpecScalar::Rational(r) => {
                if let Some(x) = exact_f64_of_rational(r) {
                    serializer.serialize_f64(x)
                } else if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
                    let mut seq = serializer.serialize_seq(Some(2))?;
                    seq.serialize_element(&n)?;
                    seq.serialize_element(&d)?;
                    seq.end()
                } else {
                    serializer.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
                }
            }
            SpecScalar::Complex { re, im } => {
                use serde::ser::SerializeMap;
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("re", re)?;
                map.serialize_entry("im", im)?;
                map.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for SpecScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = SpecScalar;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number, [num, den], \"num/den\", or {re, im}")
            }

            fn visit_f64<E: de::Error>(self, x: f64) -> Result<SpecScalar, E> {
                Ok(SpecScalar::from_f64(x))
            }

            fn visit_i64<E: de::Error>(self, x: i64) -> Result<SpecScalar, E> {
                Ok(SpecScalar::Rational(BigRational::from_integer(BigInt::from(x))))
            }

            fn visit_u64<E: de::Error>(self, x: u64) -> Result<SpecScalar, E> {
                Ok(SpecScalar::Rational(BigRational::from_integer(BigInt::from(x))))
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<SpecScalar, E> {
                let (n, d) = s
                    .split_once('/')
                    .ok_or_else(|| E::custom("expected \"num/den\""))?;
                let n: BigInt = n.trim().parse().map_err(E::custom)?;
                let d: BigInt = d.trim().parse().map_err(E::custom)?;
                if d.is_zero() {
                    return Err(E::custom("zero denominator"));
                }
                Ok(SpecScalar::Rational(BigRational::new(n, d)))
            }

            fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> Result<SpecScalar, A::Error> {
                let n: i64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::custom("expected [num, den]"))?;
                let d: i64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::custom("expected [num, den]"))?;
                if d == 0 {
                    return Err(de::Error::custom("zero denominator"));
                }
                Ok(SpecScalar::from_ratio(n, d))
            }

            fn visit_map<A: de::MapAccess<'de>>(self, mut map: A) -> Result<SpecScalar, A::Error> {
                let mut re = None;
                let mut im = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "re" => re = Some(map.next_value::<f64>()?),
                        "im" => im = Some(map.next_value::<f64>()?),
                        other => return Err(de::Error::custom(format!("unknown key {other}"))),
                    }
                }
                Ok(SpecScalar::complex(
                    re.ok_or_else(|| de::Error::custom("missing re"))?,
                    im.unwrap_or(0.0),
                ))
            }
        }
        deserializer.deserialize_any(V)
    }
}
