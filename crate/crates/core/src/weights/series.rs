//! Cumulative log-moduli of the weight products.
//!
//! Raw products `w_1 .. w_n` overflow for horizons in the thousands, so every
//! criterion works with `L_n = sum_{k<=n} ln|w_k|` plus a unimodular part
//! (exact sign parity for real weights, accumulated argument mod 2 pi for
//! complex ones). Values are immutable once computed: extending the horizon
//! appends and never rewrites existing entries.

use num_complex::Complex;

use crate::error::Result;
use crate::real::Real;
use crate::weights::spec::WeightSpec;

/// Unimodular part of the partial products.
#[derive(Clone, Debug)]
enum PhaseSeries<T> {
    /// All products positive real.
    Positive,
    /// Real weights with signs: `true` marks a negative product.
    Signs(Vec<bool>),
    /// Complex weights: accumulated argument in `[0, 2 pi)`.
    Angles(Vec<T>),
}

/// Cached `L_n = ln |w_1 .. w_n|` for `n = 0..=horizon`, with phases.
///
/// The accumulation is compensated (Kahan), which keeps the error of `L_n`
/// at a few ulps instead of growing linearly in `n`; ratio statistics
/// `L^u_n - L^v_n` between two series would otherwise drown in accumulated
/// rounding around horizon 10^5.
#[derive(Clone, Debug)]
pub struct LogProductSeries<T> {
    logs: Vec<T>,
    compensation: T,
    phases: PhaseSeries<T>,
}

impl<T: Real> LogProductSeries<T> {
    /// Compute the series for `n = 0..=horizon`.
    pub fn build(spec: &WeightSpec, horizon: usize) -> Result<Self> {
        let mut series = LogProductSeries {
            logs: vec![T::zero()],
            compensation: T::zero(),
            phases: PhaseSeries::Positive,
        };
        series.extend_to(spec, horizon)?;
        Ok(series)
    }

    /// Extended copy; entries up to the old horizon are bit-identical (the
    /// compensation term is carried along, so appending reproduces exactly
    /// what a fresh full computation yields).
    pub fn extended(&self, spec: &WeightSpec, horizon: usize) -> Result<Self> {
        let mut out = self.clone();
        out.extend_to(spec, horizon)?;
        Ok(out)
    }

    fn extend_to(&mut self, spec: &WeightSpec, horizon: usize) -> Result<()> {
        use crate::weights::spec::ArgKind;
        let two_pi = T::PI() + T::PI();
        for n in self.logs.len()..=horizon {
            let w = spec.eval_log(n)?;
            let prev = *self.logs.last().expect("series is never empty");
            let increment = T::of(w.ln_modulus) - self.compensation;
            let next = prev + increment;
            self.compensation = (next - prev) - increment;
            self.logs.push(next);
            match &mut self.phases {
                PhaseSeries::Positive => match w.arg {
                    ArgKind::Positive => {}
                    ArgKind::NegativeReal => {
                        let mut signs = vec![false; n];
                        signs.push(true);
                        self.phases = PhaseSeries::Signs(signs);
                    }
                    ArgKind::Angle(arg) => {
                        let mut angles = vec![T::zero(); n];
                        angles.push(T::of(arg));
                        self.phases = PhaseSeries::Angles(angles);
                    }
                },
                PhaseSeries::Signs(signs) => match w.arg {
                    ArgKind::Positive | ArgKind::NegativeReal => {
                        let prev = *signs.last().unwrap();
                        signs.push(prev ^ (w.arg == ArgKind::NegativeReal));
                    }
                    ArgKind::Angle(arg) => {
                        // promote to angles
                        let mut angles: Vec<T> = signs
                            .iter()
                            .map(|s| if *s { T::PI() } else { T::zero() })
                            .collect();
                        let mut theta = *angles.last().unwrap() + T::of(arg);
                        theta = theta % two_pi;
                        if theta < T::zero() {
                            theta += two_pi;
                        }
                        angles.push(theta);
                        self.phases = PhaseSeries::Angles(angles);
                    }
                },
                PhaseSeries::Angles(angles) => {
                    let arg = match w.arg {
                        ArgKind::Positive => 0.0,
                        ArgKind::NegativeReal => std::f64::consts::PI,
                        ArgKind::Angle(a) => a,
                    };
                    let mut theta = *angles.last().unwrap() + T::of(arg);
                    theta = theta % two_pi;
                    if theta < T::zero() {
                        theta += two_pi;
                    }
                    angles.push(theta);
                }
            }
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.logs.len() - 1
    }

    /// `L_n`.
    pub fn log(&self, n: usize) -> T {
        self.logs[n]
    }

    pub fn logs(&self) -> &[T] {
        &self.logs
    }

    /// Argument of `w_1 .. w_n` in `[0, 2 pi)`.
    pub fn phase(&self, n: usize) -> T {
        match &self.phases {
            PhaseSeries::Positive => T::zero(),
            PhaseSeries::Signs(signs) => {
                if signs[n] {
                    T::PI()
                } else {
                    T::zero()
                }
            }
            PhaseSeries::Angles(angles) => angles[n],
        }
    }

    /// Unimodular factor of `w_1 .. w_n`; exactly `+-1` for real weights.
    pub fn unit(&self, n: usize) -> Complex<T> {
        match &self.phases {
            PhaseSeries::Positive => Complex::new(T::one(), T::zero()),
            PhaseSeries::Signs(signs) => {
                Complex::new(if signs[n] { -T::one() } else { T::one() }, T::zero())
            }
            PhaseSeries::Angles(angles) => Complex::new(angles[n].cos(), angles[n].sin()),
        }
    }

    /// `ln |w_{j+1} .. w_m|` for `j <= m`.
    pub fn segment_log(&self, j: usize, m: usize) -> T {
        self.logs[m] - self.logs[j]
    }

    /// Unimodular factor of `w_{j+1} .. w_m`; exact for real weights.
    pub fn segment_unit(&self, j: usize, m: usize) -> Complex<T> {
        match &self.phases {
            PhaseSeries::Positive => Complex::new(T::one(), T::zero()),
            PhaseSeries::Signs(signs) => Complex::new(
                if signs[j] ^ signs[m] { -T::one() } else { T::one() },
                T::zero(),
            ),
            PhaseSeries::Angles(angles) => {
                let theta = angles[m] - angles[j];
                Complex::new(theta.cos(), theta.sin())
            }
        }
    }

    /// `w_{j+1} .. w_m` as a complex scalar, computed through the log cache.
    pub fn segment_product(&self, j: usize, m: usize) -> Complex<T> {
        self.segment_unit(j, m) * self.segment_log(j, m).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::SpecScalar;
    use crate::weights::spec::{EpsilonSeq, WeightSpec};

    #[test]
    fn constant_two_logs() {
        let s: LogProductSeries<f64> = LogProductSeries::build(&WeightSpec::constant(2.0), 3).unwrap();
        let ln2 = 2.0f64.ln();
        assert_eq!(s.log(0), 0.0);
        for n in 1..=3 {
            assert!((s.log(n) - n as f64 * ln2).abs() < 1e-15);
        }
    }

    #[test]
    fn extension_preserves_prefix() {
        let spec = WeightSpec::ratio_telescope(2.0, EpsilonSeq::InversePower { power: 2.0 });
        let a: LogProductSeries<f64> = LogProductSeries::build(&spec, 50).unwrap();
        let b = a.extended(&spec, 200).unwrap();
        for n in 0..=50 {
            assert_eq!(a.log(n), b.log(n));
        }
        let fresh: LogProductSeries<f64> = LogProductSeries::build(&spec, 200).unwrap();
        for n in 0..=200 {
            assert_eq!(fresh.log(n), b.log(n));
        }
    }

    #[test]
    fn signs_track_negative_weights() {
        let spec = WeightSpec::constant_scalar(SpecScalar::from_f64(-2.0));
        let s: LogProductSeries<f64> = LogProductSeries::build(&spec, 4).unwrap();
        assert_eq!(s.unit(0).re, 1.0);
        assert_eq!(s.unit(1).re, -1.0);
        assert_eq!(s.unit(2).re, 1.0);
        assert_eq!(s.segment_unit(1, 2).re, -1.0);
    }

    #[test]
    fn complex_phase_accumulates() {
        let spec = WeightSpec::constant_scalar(SpecScalar::complex(0.0, 2.0));
        let s: LogProductSeries<f64> = LogProductSeries::build(&spec, 4).unwrap();
        // w = 2i: phase pi/2 per step, modulus 2
        assert!((s.phase(1) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((s.phase(4) - 0.0).abs() < 1e-12); // 2 pi wraps to 0
        assert!((s.log(4) - 4.0 * 2.0f64.ln()).abs() < 1e-14);
    }
}
