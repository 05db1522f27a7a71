//! Symbolic weight sequences.
//!
//! A [`WeightSpec`] is an exactly evaluable description of a bounded sequence
//! of non-zero scalars `(w_n)_{n >= 1}`. All dynamical criteria in this crate
//! are driven by the partial products `w_1 .. w_n`, so the spec is designed so
//! that `w_n` can be evaluated exactly (rational) whenever the inputs permit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rational_from_f64, SpecScalar};

/// Scalar field of the ambient space: `d = 1` for real, `d = 2` for complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Real dimension of the field.
    pub fn dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }
}

/// Value attached to the k-th member of a sparse exception family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyValue {
    /// Value `1/k` at the k-th family block (k = 1, 2, ...).
    OneOverK,
    /// Fixed scalar for every family member.
    Scalar(SpecScalar),
}

/// Generator for the exceptional positions of a sparse spec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "positions", rename_all = "snake_case")]
pub enum ExceptionGen {
    /// Explicit strictly increasing `(position, value)` pairs.
    List { pairs: Vec<(usize, SpecScalar)> },
    /// Positions `coeff * ratio^k + offset` for k >= 1 and each listed offset.
    Formula {
        coeff: u64,
        ratio: u64,
        offsets: Vec<u64>,
        value: FamilyValue,
    },
}

/// Non-negative epsilon sequence for the telescoping kind; `eps_0 = 0` always.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum EpsilonSeq {
    /// `eps_n = n^{-power}` (exact rational when `power` is a small integer).
    InversePower { power: f64 },
    /// `eps_n = q^n`, `0 < q < 1`.
    Geometric { q: f64 },
    /// Explicit values `eps_1, eps_2, ...`; indices beyond the list are a
    /// horizon error.
    List { values: Vec<f64> },
    /// `eps_n = 0` for all n.
    Zero,
}

impl EpsilonSeq {
    /// `eps_n` for n >= 0 (`eps_0 = 0`).
    pub fn eval(&self, n: usize) -> Result<SpecScalar> {
        if n == 0 {
            return Ok(SpecScalar::from_f64(0.0));
        }
        match self {
            EpsilonSeq::InversePower { power } => {
                if *power == 0.0 {
                    return Ok(SpecScalar::one());
                }
                if power.fract() == 0.0 && *power > 0.0 && *power <= 16.0 {
                    let d = (n as i64).checked_pow(*power as u32);
                    if let Some(d) = d {
                        return Ok(SpecScalar::from_ratio(1, d));
                    }
                }
                Ok(SpecScalar::complex((n as f64).powf(-power), 0.0))
            }
            EpsilonSeq::Geometric { q } => {
                if n <= 4096 {
                    if let Some(r) = rational_from_f64(*q) {
                        use num_traits::Pow;
                        return Ok(SpecScalar::from_rational(r.pow(n as i32)));
                    }
                }
                Ok(SpecScalar::complex(q.powi(n as i32), 0.0))
            }
            EpsilonSeq::List { values } => values
                .get(n - 1)
                .map(|&v| SpecScalar::from_f64(v))
                .ok_or(Error::HorizonExceeded(n)),
            EpsilonSeq::Zero => Ok(SpecScalar::from_f64(0.0)),
        }
    }

    /// `eps_n` as plain `f64` (the allocation-free companion of [`Self::eval`]).
    pub fn eval_f64(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(0.0);
        }
        match self {
            EpsilonSeq::InversePower { power } => Ok((n as f64).powf(-power)),
            EpsilonSeq::Geometric { q } => Ok(q.powi(n as i32)),
            EpsilonSeq::List { values } => {
                values.get(n - 1).copied().ok_or(Error::HorizonExceeded(n))
            }
            EpsilonSeq::Zero => Ok(0.0),
        }
    }

    /// `ln eps_n` without under/overflow (`-inf` for an exact zero).
    pub fn ln_eval(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(f64::NEG_INFINITY);
        }
        match self {
            EpsilonSeq::InversePower { power } => Ok(-power * (n as f64).ln()),
            EpsilonSeq::Geometric { q } => Ok(n as f64 * q.ln()),
            EpsilonSeq::List { values } => values
                .get(n - 1)
                .map(|&v| v.ln())
                .ok_or(Error::HorizonExceeded(n)),
            EpsilonSeq::Zero => Ok(f64::NEG_INFINITY),
        }
    }

    /// Upper bound for `eps_n`, n >= 1, when one is certified.
    fn upper_bound(&self) -> Option<f64> {
        match self {
            EpsilonSeq::InversePower { .. } => Some(1.0),
            EpsilonSeq::Geometric { q } => Some(*q),
            EpsilonSeq::List { values } => values.iter().cloned().fold(None, |acc, v| {
                Some(acc.map_or(v, |a: f64| a.max(v)))
            }),
            EpsilonSeq::Zero => Some(0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            EpsilonSeq::InversePower { power } if *power < 0.0 => Err(Error::ConfigError(
                "inverse_power epsilon requires power >= 0".into(),
            )),
            EpsilonSeq::Geometric { q } if !(*q > 0.0 && *q < 1.0) => Err(Error::ConfigError(
                "geometric epsilon requires 0 < q < 1".into(),
            )),
            EpsilonSeq::List { values } if values.iter().any(|v| *v < 0.0 || !v.is_finite()) => {
                Err(Error::ConfigError("epsilon values must be finite and non-negative".into()))
            }
            _ => Ok(()),
        }
    }
}

/// The construction rule of a weight sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// `w_n = c`.
    Constant { value: SpecScalar },
    /// `w_n = a * base_n`.
    Scaled {
        factor: SpecScalar,
        base: Box<WeightSpec>,
    },
    /// `w_n = prefix[n-1]` for n <= len, then the constant tail.
    Prefix {
        prefix: Vec<SpecScalar>,
        tail: SpecScalar,
    },
    /// Constant base with exceptional values at sparse positions.
    Sparse {
        base: SpecScalar,
        exceptions: ExceptionGen,
    },
    /// `w_n = base * (1 + eps_n) / (1 + eps_{n-1})`, telescoping so that
    /// `w_1 .. w_n = base^n (1 + eps_n)`.
    Ratio { base: SpecScalar, epsilons: EpsilonSeq },
}

/// Symbolic, exactly evaluable description of a weight sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    #[serde(flatten)]
    pub kind: WeightKind,
    pub field: Field,
}

/// Certified linear structure of the cumulative log-moduli:
/// `L_n = n * gamma + rho_n` with `|rho_n| <= rho_bound` for all n.
#[derive(Clone, Copy, Debug)]
pub struct TailStructure {
    pub gamma: f64,
    pub rho_bound: f64,
}

/// Log-modulus plus unimodular part of a single weight.
#[derive(Clone, Copy, Debug)]
pub struct LogWeight {
    pub ln_modulus: f64,
    pub arg: ArgKind,
}

/// Unimodular part of a scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ArgKind {
    Positive,
    NegativeReal,
    Angle(f64),
}

impl LogWeight {
    fn of_scalar(s: &SpecScalar) -> LogWeight {
        let arg = match s {
            SpecScalar::Rational(r) => {
                use num_traits::Signed;
                if r.is_negative() {
                    ArgKind::NegativeReal
                } else {
                    ArgKind::Positive
                }
            }
            SpecScalar::Complex { re, im } => {
                if *im == 0.0 {
                    if *re < 0.0 {
                        ArgKind::NegativeReal
                    } else {
                        ArgKind::Positive
                    }
                } else {
                    ArgKind::Angle(im.atan2(*re))
                }
            }
        };
        LogWeight { ln_modulus: s.modulus_f64().ln(), arg }
    }

    fn mul(self, other: LogWeight) -> LogWeight {
        let arg = match (self.arg, other.arg) {
            (ArgKind::Positive, a) | (a, ArgKind::Positive) => a,
            (ArgKind::NegativeReal, ArgKind::NegativeReal) => ArgKind::Positive,
            (ArgKind::NegativeReal, ArgKind::Angle(t)) | (ArgKind::Angle(t), ArgKind::NegativeReal) => {
                ArgKind::Angle(t + std::f64::consts::PI)
            }
            (ArgKind::Angle(a), ArgKind::Angle(b)) => ArgKind::Angle(a + b),
        };
        LogWeight { ln_modulus: self.ln_modulus + other.ln_modulus, arg }
    }
}

impl WeightSpec {
    pub fn constant(value: f64) -> Self {
        Self::constant_scalar(SpecScalar::from_f64(value))
    }

    pub fn constant_scalar(value: SpecScalar) -> Self {
        let field = if value.is_real() { Field::Real } else { Field::Complex };
        WeightSpec { kind: WeightKind::Constant { value }, field }
    }

    pub fn scaled(factor: SpecScalar, base: WeightSpec) -> Self {
        let field = if factor.is_real() && base.field == Field::Real {
            Field::Real
        } else {
            Field::Complex
        };
        WeightSpec {
            kind: WeightKind::Scaled { factor, base: Box::new(base) },
            field,
        }
    }

    pub fn prefix_then_constant(prefix: Vec<f64>, tail: f64) -> Self {
        WeightSpec {
            kind: WeightKind::Prefix {
                prefix: prefix.into_iter().map(SpecScalar::from_f64).collect(),
                tail: SpecScalar::from_f64(tail),
            },
            field: Field::Real,
        }
    }

    pub fn sparse(base: f64, exceptions: ExceptionGen) -> Self {
        WeightSpec {
            kind: WeightKind::Sparse { base: SpecScalar::from_f64(base), exceptions },
            field: Field::Real,
        }
    }

    pub fn ratio_telescope(base: f64, epsilons: EpsilonSeq) -> Self {
        WeightSpec {
            kind: WeightKind::Ratio { base: SpecScalar::from_f64(base), epsilons },
            field: Field::Real,
        }
    }

    /// Check the structural invariants: non-zero scalars, strictly increasing
    /// exception positions, field consistency, valid epsilon generator.
    pub fn validate(&self) -> Result<()> {
        let check_nonzero = |s: &SpecScalar| {
            if s.is_zero() {
                Err(Error::InvalidWeight(0))
            } else {
                Ok(())
            }
        };
        if self.field == Field::Real && !self.kind_scalars_real() {
            return Err(Error::ConfigError(
                "real-field spec contains a complex scalar".into(),
            ));
        }
        match &self.kind {
            WeightKind::Constant { value } => check_nonzero(value),
            WeightKind::Scaled { factor, base } => {
                check_nonzero(factor)?;
                base.validate()
            }
            WeightKind::Prefix { prefix, tail } => {
                for p in prefix {
                    check_nonzero(p)?;
                }
                check_nonzero(tail)
            }
            WeightKind::Sparse { base, exceptions } => {
                check_nonzero(base)?;
                match exceptions {
                    ExceptionGen::List { pairs } => {
                        let mut last = 0usize;
                        for (pos, v) in pairs {
                            if *pos == 0 || *pos <= last {
                                return Err(Error::ConfigError(
                                    "exception positions must be >= 1 and strictly increasing"
                                        .into(),
                                ));
                            }
                            last = *pos;
                            check_nonzero(v)?;
                        }
                        Ok(())
                    }
                    ExceptionGen::Formula { coeff, ratio, offsets, value } => {
                        if *coeff == 0 || *ratio < 2 {
                            return Err(Error::ConfigError(
                                "formula exceptions require coeff >= 1 and ratio >= 2".into(),
                            ));
                        }
                        if offsets.windows(2).any(|w| w[0] >= w[1]) {
                            return Err(Error::ConfigError(
                                "formula offsets must be strictly increasing".into(),
                            ));
                        }
                        // successive k-blocks must not interleave
                        if let Some(&max_off) = offsets.last() {
                            if max_off >= coeff * ratio * (ratio - 1) {
                                return Err(Error::ConfigError(
                                    "formula offsets too large: position blocks interleave".into(),
                                ));
                            }
                        }
                        if let FamilyValue::Scalar(s) = value {
                            check_nonzero(s)?;
                        }
                        Ok(())
                    }
                }
            }
            WeightKind::Ratio { base, epsilons } => {
                check_nonzero(base)?;
                epsilons.validate()
            }
        }
    }

    fn kind_scalars_real(&self) -> bool {
        match &self.kind {
            WeightKind::Constant { value } => value.is_real(),
            WeightKind::Scaled { factor, base } => factor.is_real() && base.kind_scalars_real(),
            WeightKind::Prefix { prefix, tail } => {
                prefix.iter().all(|p| p.is_real()) && tail.is_real()
            }
            WeightKind::Sparse { base, exceptions } => {
                base.is_real()
                    && match exceptions {
                        ExceptionGen::List { pairs } => pairs.iter().all(|(_, v)| v.is_real()),
                        ExceptionGen::Formula { value, .. } => match value {
                            FamilyValue::OneOverK => true,
                            FamilyValue::Scalar(s) => s.is_real(),
                        },
                    }
            }
            WeightKind::Ratio { base, .. } => base.is_real(),
        }
    }

    /// Log-modulus and unimodular part of `w_n` in plain `f64` arithmetic.
    /// This is the hot path for building log-product series at horizons of
    /// 10^6; it must stay allocation-free (the exact [`Self::eval`] route is
    /// for identity checks, not bulk scans).
    pub fn eval_log(&self, n: usize) -> Result<LogWeight> {
        if n == 0 {
            return Err(Error::HorizonExceeded(0));
        }
        let w = match &self.kind {
            WeightKind::Constant { value } => LogWeight::of_scalar(value),
            WeightKind::Scaled { factor, base } => {
                let inner = base.eval_log(n)?;
                LogWeight::of_scalar(factor).mul(inner)
            }
            WeightKind::Prefix { prefix, tail } => {
                LogWeight::of_scalar(prefix.get(n - 1).unwrap_or(tail))
            }
            WeightKind::Sparse { base, exceptions } => match exceptions.lookup_log(n) {
                Some(w) => w,
                None => LogWeight::of_scalar(base),
            },
            WeightKind::Ratio { base, epsilons } => {
                let e_n = epsilons.eval_f64(n)?;
                let e_prev = epsilons.eval_f64(n - 1)?;
                let mut w = LogWeight::of_scalar(base);
                w.ln_modulus += e_n.ln_1p() - e_prev.ln_1p();
                w
            }
        };
        if w.ln_modulus == f64::NEG_INFINITY {
            return Err(Error::InvalidWeight(n));
        }
        Ok(w)
    }

    /// Evaluate `w_n`, n >= 1. Deterministic; exact whenever the inputs are.
    pub fn eval(&self, n: usize) -> Result<SpecScalar> {
        if n == 0 {
            return Err(Error::HorizonExceeded(0));
        }
        let value = match &self.kind {
            WeightKind::Constant { value } => value.clone(),
            WeightKind::Scaled { factor, base } => factor.mul(&base.eval(n)?),
            WeightKind::Prefix { prefix, tail } => {
                prefix.get(n - 1).cloned().unwrap_or_else(|| tail.clone())
            }
            WeightKind::Sparse { base, exceptions } => match exceptions.lookup(n) {
                Some(v) => v,
                None => base.clone(),
            },
            WeightKind::Ratio { base, epsilons } => {
                let e_n = epsilons.eval(n)?;
                let e_prev = epsilons.eval(n - 1)?;
                let one_plus = |e: &SpecScalar| SpecScalar::one().add_scalar(e);
                base.mul(&one_plus(&e_n).div(&one_plus(&e_prev)))
            }
        };
        if value.is_zero() {
            return Err(Error::InvalidWeight(n));
        }
        Ok(value)
    }

    /// Certified linear decomposition of the log-products, when the kind
    /// admits one: `L_n = n * gamma + rho_n`, `|rho_n| <= rho_bound`.
    pub fn tail_structure(&self) -> Option<TailStructure> {
        match &self.kind {
            WeightKind::Constant { value } => Some(TailStructure {
                gamma: value.modulus_f64().ln(),
                rho_bound: 0.0,
            }),
            WeightKind::Scaled { factor, base } => {
                let inner = base.tail_structure()?;
                Some(TailStructure {
                    gamma: inner.gamma + factor.modulus_f64().ln(),
                    rho_bound: inner.rho_bound,
                })
            }
            WeightKind::Prefix { prefix, tail } => {
                let gamma = tail.modulus_f64().ln();
                let mut rho: f64 = 0.0;
                let mut bound: f64 = 0.0;
                for p in prefix {
                    rho += p.modulus_f64().ln() - gamma;
                    bound = bound.max(rho.abs());
                }
                Some(TailStructure { gamma, rho_bound: bound })
            }
            WeightKind::Sparse { base, exceptions } => match exceptions {
                ExceptionGen::List { pairs } => {
                    let gamma = base.modulus_f64().ln();
                    let mut rho: f64 = 0.0;
                    let mut bound: f64 = 0.0;
                    for (_, v) in pairs {
                        rho += v.modulus_f64().ln() - gamma;
                        bound = bound.max(rho.abs());
                    }
                    Some(TailStructure { gamma, rho_bound: bound })
                }
                // infinitely many exceptions: cumulative deviation unbounded
                ExceptionGen::Formula { .. } => None,
            },
            WeightKind::Ratio { base, epsilons } => {
                let eps_max = epsilons.upper_bound()?;
                Some(TailStructure {
                    gamma: base.modulus_f64().ln(),
                    rho_bound: (1.0 + eps_max).ln(),
                })
            }
        }
    }

    /// Certified lower bound on `inf_n |w_n|`, when strictly positive.
    pub fn modulus_lower_bound(&self) -> Option<f64> {
        match &self.kind {
            WeightKind::Constant { value } => Some(value.modulus_f64()),
            WeightKind::Scaled { factor, base } => {
                Some(factor.modulus_f64() * base.modulus_lower_bound()?)
            }
            WeightKind::Prefix { prefix, tail } => {
                let mut m = tail.modulus_f64();
                for p in prefix {
                    m = m.min(p.modulus_f64());
                }
                Some(m)
            }
            WeightKind::Sparse { base, exceptions } => match exceptions {
                ExceptionGen::List { pairs } => {
                    let mut m = base.modulus_f64();
                    for (_, v) in pairs {
                        m = m.min(v.modulus_f64());
                    }
                    Some(m)
                }
                ExceptionGen::Formula { value, .. } => match value {
                    // values 1/k tend to zero
                    FamilyValue::OneOverK => None,
                    FamilyValue::Scalar(s) => Some(base.modulus_f64().min(s.modulus_f64())),
                },
            },
            WeightKind::Ratio { base, epsilons } => {
                let eps_max = epsilons.upper_bound()?;
                Some(base.modulus_f64() / (1.0 + eps_max))
            }
        }
    }

    /// Certified linear structure of the log product ratio against another
    /// spec: `ln |u_1..u_n / v_1..v_n| = n * slope + bounded(band)`.
    /// Available for scaled copies of a common sequence or when both specs
    /// carry a tail structure.
    pub fn ratio_structure(&self, other: &WeightSpec) -> Option<(f64, f64)> {
        if let Some(r) = self.scalar_ratio_to(other) {
            return Some((r.modulus_f64().ln(), 0.0));
        }
        let tu = self.tail_structure()?;
        let tv = other.tail_structure()?;
        Some((tu.gamma - tv.gamma, tu.rho_bound + tv.rho_bound))
    }

    /// If `u = a * w` and `v = b * w` for a common sequence `w`, return the
    /// exact per-index ratio `a / b` of the two specs.
    pub fn scalar_ratio_to(&self, other: &WeightSpec) -> Option<SpecScalar> {
        fn split(spec: &WeightSpec) -> (SpecScalar, &WeightSpec) {
            match &spec.kind {
                WeightKind::Scaled { factor, base } => {
                    let (inner, core) = split(base);
                    (factor.mul(&inner), core)
                }
                _ => (SpecScalar::one(), spec),
            }
        }
        let (a, wu) = split(self);
        let (b, wv) = split(other);
        if wu.kind == wv.kind {
            Some(a.div(&b))
        } else if let (WeightKind::Constant { value: cu }, WeightKind::Constant { value: cv }) =
            (&wu.kind, &wv.kind)
        {
            Some(a.mul(cu).div(&b.mul(cv)))
        } else {
            None
        }
    }
}

impl ExceptionGen {
    /// Family index `k >= 1` when `n = coeff * ratio^k + offset` for one of
    /// the offsets.
    fn formula_index(coeff: u64, ratio: u64, offsets: &[u64], n: usize) -> Option<usize> {
        for &off in offsets {
            let off = off as usize;
            if n <= off {
                continue;
            }
            let m = n - off;
            let coeff = coeff as usize;
            if !m.is_multiple_of(coeff) {
                continue;
            }
            let mut t = m / coeff;
            let ratio = ratio as usize;
            if t < ratio {
                continue;
            }
            let mut k = 0usize;
            while t.is_multiple_of(ratio) {
                t /= ratio;
                k += 1;
            }
            if t == 1 && k >= 1 {
                return Some(k);
            }
        }
        None
    }

    /// Exceptional value at position n, if any.
    pub fn lookup(&self, n: usize) -> Option<SpecScalar> {
        match self {
            ExceptionGen::List { pairs } => pairs
                .binary_search_by_key(&n, |(p, _)| *p)
                .ok()
                .map(|i| pairs[i].1.clone()),
            ExceptionGen::Formula { coeff, ratio, offsets, value } => {
                Self::formula_index(*coeff, *ratio, offsets, n).map(|k| match value {
                    FamilyValue::OneOverK => SpecScalar::from_ratio(1, k as i64),
                    FamilyValue::Scalar(s) => s.clone(),
                })
            }
        }
    }

    /// Allocation-free log view of the exceptional value at position n.
    pub fn lookup_log(&self, n: usize) -> Option<LogWeight> {
        match self {
            ExceptionGen::List { pairs } => pairs
                .binary_search_by_key(&n, |(p, _)| *p)
                .ok()
                .map(|i| LogWeight::of_scalar(&pairs[i].1)),
            ExceptionGen::Formula { coeff, ratio, offsets, value } => {
                Self::formula_index(*coeff, *ratio, offsets, n).map(|k| match value {
                    FamilyValue::OneOverK => LogWeight {
                        ln_modulus: -(k as f64).ln(),
                        arg: ArgKind::Positive,
                    },
                    FamilyValue::Scalar(s) => LogWeight::of_scalar(s),
                })
            }
        }
    }
}

impl SpecScalar {
    /// `self + other`, exact for rational pairs.
    pub fn add_scalar(&self, other: &SpecScalar) -> SpecScalar {
        match (self, other) {
            (SpecScalar::Rational(a), SpecScalar::Rational(b)) => SpecScalar::Rational(a + b),
            _ => {
                let a = self.to_complex::<f64>();
                let b = other.to_complex::<f64>();
                SpecScalar::complex(a.re + b.re, a.im + b.im)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The swapped-exceptions pair used across the test suite: base weight 2,
    /// with value 1/k at positions 5 r^k + {1,4} for u and 5 r^k + {2,3} for v.
    pub fn swapped_pair(ratio: u64) -> (WeightSpec, WeightSpec) {
        let u = WeightSpec::sparse(
            2.0,
            ExceptionGen::Formula { coeff: 5, ratio, offsets: vec![1, 4], value: FamilyValue::OneOverK },
        );
        let v = WeightSpec::sparse(
            2.0,
            ExceptionGen::Formula { coeff: 5, ratio, offsets: vec![2, 3], value: FamilyValue::OneOverK },
        );
        (u, v)
    }

    #[test]
    fn constant_rule() {
        let w = WeightSpec::constant(2.0);
        assert_eq!(w.eval(7).unwrap(), SpecScalar::from_f64(2.0));
    }

    #[test]
    fn sparse_formula_positions() {
        // with r_1 = 4: exceptional at 5*4+1 = 21 and 5*4+4 = 24, value 1/1
        let (u, _) = swapped_pair(4);
        assert_eq!(u.eval(21).unwrap(), SpecScalar::one());
        assert_eq!(u.eval(24).unwrap(), SpecScalar::one());
        assert_eq!(u.eval(22).unwrap(), SpecScalar::from_f64(2.0));
        // k = 2: positions 5*16+1 = 81, value 1/2
        assert_eq!(u.eval(81).unwrap(), SpecScalar::from_ratio(1, 2));
        // position 20 = 5*4 + 0 is not exceptional
        assert_eq!(u.eval(20).unwrap(), SpecScalar::from_f64(2.0));
    }

    #[test]
    fn ratio_telescope_first_term() {
        // eps_n = 1/n^2: w_1 = 2 * (1 + 1) / (1 + 0) = 4
        let w = WeightSpec::ratio_telescope(2.0, EpsilonSeq::InversePower { power: 2.0 });
        assert_eq!(w.eval(1).unwrap(), SpecScalar::from_f64(4.0));
        // w_2 = 2 * (1 + 1/4) / 2 = 5/4
        assert_eq!(w.eval(2).unwrap(), SpecScalar::from_ratio(5, 4));
    }

    #[test]
    fn prefix_then_tail() {
        let w = WeightSpec::prefix_then_constant(vec![3.0], 2.0);
        assert_eq!(w.eval(1).unwrap(), SpecScalar::from_f64(3.0));
        assert_eq!(w.eval(2).unwrap(), SpecScalar::from_f64(2.0));
    }

    #[test]
    fn zero_weight_rejected() {
        let w = WeightSpec::prefix_then_constant(vec![0.0], 2.0);
        assert!(matches!(w.eval(1), Err(Error::InvalidWeight(1))));
        assert!(w.validate().is_err());
    }

    #[test]
    fn scaled_pair_ratio() {
        let w = WeightSpec::constant(1.0);
        let u = WeightSpec::scaled(SpecScalar::from_f64(2.0), w.clone());
        let v = WeightSpec::scaled(SpecScalar::from_f64(3.0), w);
        let r = u.scalar_ratio_to(&v).unwrap();
        assert_eq!(r, SpecScalar::from_ratio(2, 3));
        // constants count as scaled copies of the unit sequence
        let a = WeightSpec::constant(2.0);
        let b = WeightSpec::constant(3.0);
        assert_eq!(a.scalar_ratio_to(&b).unwrap(), SpecScalar::from_ratio(2, 3));
    }

    #[test]
    fn spec_json_roundtrip() {
        let (u, _) = swapped_pair(4);
        let json = serde_json::to_string(&u).unwrap();
        let back: WeightSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(u, back);
        let parsed: WeightSpec = serde_json::from_str(
            r#"{"kind":"constant","value":2,"field":"real"}"#,
        )
        .unwrap();
        assert_eq!(parsed, WeightSpec::constant(2.0));
    }

    #[test]
    fn tail_structure_examples() {
        let c = WeightSpec::constant(2.0).tail_structure().unwrap();
        assert!((c.gamma - 2.0f64.ln()).abs() < 1e-15 && c.rho_bound == 0.0);
        let (u, _) = swapped_pair(4);
        assert!(u.tail_structure().is_none());
        let t = WeightSpec::ratio_telescope(2.0, EpsilonSeq::InversePower { power: 1.0 })
            .tail_structure()
            .unwrap();
        assert!((t.gamma - 2.0f64.ln()).abs() < 1e-15);
        assert!((t.rho_bound - 2.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn bounded_below_detection() {
        assert_eq!(WeightSpec::constant(2.0).modulus_lower_bound(), Some(2.0));
        let (u, _) = swapped_pair(4);
        assert_eq!(u.modulus_lower_bound(), None);
    }
}
