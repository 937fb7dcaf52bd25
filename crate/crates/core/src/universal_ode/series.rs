//! Power series of the screening function about the origin in `t = sqrt(x)`.
//!
//! With `u = sum a_n t^n`, the equation `u'' = u^{3/2} / sqrt(x)` becomes
//! `n (n - 2) a_n = 4 [u^{3/2}]_{n-3}`, with `a_0 = 1`, `a_1 = 0`, `a_2 = -B`.

use crate::scalar::{lit, Real};

pub(crate) const SERIES_TERMS: usize = 32;

#[derive(Debug, Clone)]
pub struct OriginSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Real> OriginSeries<T> {
    pub fn new(slope: T) -> Self {
        let n_max = SERIES_TERMS;
        let alpha = lit::<T>(1.5);
        let mut a = vec![T::zero(); n_max + 1];
        // p holds the coefficients of u^{3/2}, filled as far as a allows.
        let mut p = vec![T::zero(); n_max + 1];
        a[0] = T::one();
        a[2] = -slope;
        p[0] = T::one();
        for n in 3..=n_max {
            let m = n - 3;
            if m > 0 {
                let mut s = T::zero();
                for k in 1..=m {
                    let w = (alpha + T::one()) * T::from_usize(k).unwrap() - T::from_usize(m).unwrap();
                    s += w * a[k] * p[m - k];
                }
                p[m] = s / T::from_usize(m).unwrap();
            }
            a[n] = lit::<T>(4.0) * p[m] / T::from_usize(n * (n - 2)).unwrap();
        }
        Self { coeffs: a }
    }

    /// Coefficients of `u` in powers of `t = sqrt(x)`.
    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    /// Value, `du/dx` and `d2u/dx2` at `x >= 0`. The second derivative is
    /// infinite at the origin.
    pub fn eval(&self, x: T) -> (T, T, T) {
        let t = x.sqrt();
        let half = lit::<T>(0.5);
        let mut u = T::zero();
        let mut du = T::zero();
        let mut d2u = T::zero();
        for (n, &c) in self.coeffs.iter().enumerate().rev() {
            let nf = T::from_usize(n).unwrap();
            u = u * t + c;
            // du/dx = sum n a_n t^{n-2} / 2, so only n >= 2 contribute.
            if n >= 2 {
                du = du * t + nf * c * half;
            }
            // d2u/dx2 = sum n (n-2) a_n t^{n-4} / 4; accumulated as t^{n-3}.
            if n >= 3 {
                d2u = d2u * t + nf * (nf - lit(2.0)) * c * lit(0.25);
            }
        }
        (u, du, if t > T::zero() { d2u / t } else { T::infinity() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_coefficients_match_known_expansion() {
        let b = 1.588_f64;
        let s = OriginSeries::new(b);
        let a = s.coefficients();
        assert_eq!(a[0], 1.0);
        assert_eq!(a[1], 0.0);
        assert_eq!(a[2], -b);
        assert!((a[3] - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(a[4], 0.0);
        assert!((a[5] + 2.0 * b / 5.0).abs() < 1e-15);
        assert!((a[6] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn series_satisfies_the_equation() {
        let s = OriginSeries::new(1.588_071_f64);
        for &x in &[1e-6, 1e-4, 1e-2] {
            let (u, _, d2u) = s.eval(x);
            let rhs = u.powf(1.5) / x.sqrt();
            assert!((d2u - rhs).abs() < 1e-12 * rhs.abs(), "x={x}: {d2u} vs {rhs}");
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let s = OriginSeries::new(1.5_f64);
        let x = 0.01;
        let h = 1e-6;
        let fd = (s.eval(x + h).0 - s.eval(x - h).0) / (2.0 * h);
        assert!((fd - s.eval(x).1).abs() < 1e-9);
        assert_eq!(s.eval(0.0).1, -1.5);
    }
}
