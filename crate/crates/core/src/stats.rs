//! Small statistical helpers used by the sampling layer and the test suites:
//! two-sample Kolmogorov-Smirnov distance and Monte Carlo standard errors.

use crate::real::Real;

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_x - F_y|`.
///
/// Ties are handled by advancing both empirical CDFs through the tied value
/// before comparing, which keeps the statistic conservative for discrete
/// samples.
pub fn ks_two_sample<T: Real>(xs: &[T], ys: &[T]) -> T {
    assert!(!xs.is_empty() && !ys.is_empty(), "KS needs non-empty samples");
    let mut xs = xs.to_vec();
    let mut ys = ys.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    ys.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let (m, n) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = T::zero();
    while i < m && j < n {
        let t = xs[i].min(ys[j]);
        while i < m && xs[i] <= t {
            i += 1;
        }
        while j < n && ys[j] <= t {
            j += 1;
        }
        let fx = T::of_usize(i) / T::of_usize(m);
        let fy = T::of_usize(j) / T::of_usize(n);
        d = d.max((fx - fy).abs());
    }
    d
}

/// Critical value for the two-sample KS test at significance `alpha`
/// (asymptotic form `c(alpha) sqrt((m+n)/(m n))`).
pub fn ks_critical<T: Real>(m: usize, n: usize, alpha: f64) -> T {
    let c = (-0.5 * (alpha / 2.0).ln()).sqrt();
    T::of(c) * ((T::of_usize(m + n)) / (T::of_usize(m) * T::of_usize(n))).sqrt()
}

/// Sample mean.
pub fn mean<T: Real>(xs: &[T]) -> T {
    xs.iter().cloned().sum::<T>() / T::of_usize(xs.len())
}

/// Standard error of the sample mean.
pub fn std_error<T: Real>(xs: &[T]) -> T {
    let n = xs.len();
    if n < 2 {
        return T::infinity();
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (*x - m) * (*x - m)).sum::<T>() / T::of_usize(n - 1);
    (var / T::of_usize(n)).sqrt()
}

/// Standard error of a Bernoulli frequency estimate `p_hat` from `n` draws.
pub fn bernoulli_std_error<T: Real>(p_hat: T, n: usize) -> T {
    (p_hat * (T::one() - p_hat) / T::of_usize(n)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_identical_samples_is_zero() {
        let xs = [1.0f64, 2.0, 3.0];
        assert_eq!(ks_two_sample(&xs, &xs), 0.0);
    }

    #[test]
    fn ks_disjoint_samples_is_one() {
        let xs = [0.0f64, 1.0];
        let ys = [5.0f64, 6.0];
        assert_eq!(ks_two_sample(&xs, &ys), 1.0);
    }

    #[test]
    fn ks_critical_magnitude() {
        // c(0.01) = 1.6276...
        let crit: f64 = ks_critical(1000, 1000, 0.01);
        assert!((crit - 1.627_624 * (2.0f64 / 1000.0).sqrt()).abs() < 1e-4);
    }

    #[test]
    fn ks_handles_ties() {
        let xs = [1.0f64, 1.0, 1.0, 2.0];
        let ys = [1.0f64, 2.0, 2.0, 2.0];
        let d = ks_two_sample(&xs, &ys);
        // F_x(1) = 3/4, F_y(1) = 1/4
        assert!((d - 0.5).abs() < 1e-12);
    }
}
