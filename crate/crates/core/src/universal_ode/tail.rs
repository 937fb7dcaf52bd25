//! Large-x form of the screening function,
//! `chi = c x^{-3} (1 - a y + s_2 y^2 + ...)` with `y = x^{-zeta}`.

use crate::error::{Result, TfError};
use crate::numerics::lsq::least_squares;
use crate::numerics::roots::golden_section;
use crate::scalar::{lit, Real};

/// Exponent of the first correction to the `144 / x^3` law.
pub fn sommerfeld_exponent<T: Real>() -> T {
    (lit::<T>(73.0).sqrt() - lit(7.0)) * lit(0.5)
}

/// Leading coefficient `144` of the tail.
pub fn sommerfeld_coefficient<T: Real>() -> T {
    lit(144.0)
}

/// Highest power of `y` kept in the fit model.
const MAX_FIT_POWER: usize = 8;
const FIT_SAMPLES: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub struct SommerfeldTail<T = f64> {
    pub leading_coefficient: T,
    pub correction_amplitude: T,
    pub correction_exponent: T,
    pub fit_window: (T, T),
    /// Coefficients `s_2, s_3, ...` of the higher powers of `y`, relative to
    /// the leading coefficient.
    pub higher_order: Vec<T>,
}

impl<T: Real> SommerfeldTail<T> {
    /// `chi` and `chi'` at `x > 0`.
    pub fn eval(&self, x: T) -> (T, T) {
        let z = self.correction_exponent;
        let y = x.powf(-z);
        // S(y) and x dS/dx = -z y S'(y)
        let mut s = T::one() - self.correction_amplitude * y;
        let mut xds = z * self.correction_amplitude * y;
        let mut yn = y;
        for (i, &b) in self.higher_order.iter().enumerate() {
            let n = T::from_usize(i + 2).unwrap();
            yn *= y;
            s += b * yn;
            xds -= n * z * b * yn;
        }
        let c = self.leading_coefficient;
        let x3 = x * x * x;
        let chi = c * s / x3;
        let dchi = c * (xds - lit::<T>(3.0) * s) / (x3 * x);
        (chi, dchi)
    }

    /// Starting data `(chi, chi')` for an inward integration at `x`, from the
    /// series through second order in `y` with amplitude `a`.
    pub(crate) fn asymptotic_start(a: T, x: T) -> (T, T) {
        let z = sommerfeld_exponent::<T>();
        let c1 = -a;
        let two_z = z + z;
        let c2 = lit::<T>(4.5) * c1 * c1 / ((lit::<T>(3.0) + two_z) * (lit::<T>(4.0) + two_z) - lit(18.0));
        let tail = SommerfeldTail {
            leading_coefficient: sommerfeld_coefficient(),
            correction_amplitude: a,
            correction_exponent: z,
            fit_window: (x, x),
            higher_order: vec![c2],
        };
        tail.eval(x)
    }
}

/// Least-squares fit of `x^3 chi(x)` samples to `c (1 - a y + sum s_n y^n)`.
/// The exponent is found by a one-dimensional search on `[0.5, 1]`, the
/// remaining coefficients by linear least squares for each trial exponent.
pub fn fit_sommerfeld<T: Real>(xs: &[T], chi: &[T], window: (T, T)) -> Result<SommerfeldTail<T>> {
    if xs.len() != chi.len() || xs.len() < 2 * (MAX_FIT_POWER + 1) {
        return Err(TfError::IllConditioned(format!("{} samples are too few", xs.len())));
    }
    let targets: Vec<T> = xs.iter().zip(chi).map(|(&x, &c)| c * x * x * x).collect();
    let z_lo = lit::<T>(0.5);
    let z_hi = T::one();
    // Use as many correction powers as the working precision supports.
    let mut last_err = None;
    for powers in (1..=MAX_FIT_POWER).rev() {
        let rss = |z: T| solve_linear(xs, &targets, z, powers).map(|r| r.1);
        let scan: Result<Vec<T>> = (0..=50)
            .map(|i| rss(z_lo + (z_hi - z_lo) * T::from_usize(i).unwrap() / lit(50.0)))
            .collect();
        let scan = match scan {
            Ok(s) => s,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let best = scan
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let step = (z_hi - z_lo) / lit(50.0);
        let lo = (z_lo + step * T::from_usize(best.saturating_sub(1)).unwrap()).max(z_lo);
        let hi = (z_lo + step * T::from_usize(best + 1).unwrap()).min(z_hi);
        let z = golden_section(|z| rss(z).unwrap_or(T::infinity()), lo, hi);
        let (coef, _) = solve_linear(xs, &targets, z, powers)?;
        let c = coef[0];
        if !(c > T::zero()) {
            return Err(TfError::IllConditioned(format!("non-positive leading coefficient {c}")));
        }
        return Ok(SommerfeldTail {
            leading_coefficient: c,
            correction_amplitude: -coef[1] / c,
            correction_exponent: z,
            fit_window: window,
            higher_order: coef[2..].iter().map(|&b| b / c).collect(),
        });
    }
    Err(last_err.unwrap_or_else(|| TfError::IllConditioned("no admissible model".into())))
}

/// Geometric sample points on a window, as used by [`fit_sommerfeld`]
/// callers.
pub(crate) fn window_samples<T: Real>(lo: T, hi: T) -> Vec<T> {
    let ratio = (hi / lo).ln();
    let n = FIT_SAMPLES - 1;
    (0..=n)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo * (ratio * T::from_usize(i).unwrap() / T::from_usize(n).unwrap()).exp()
            }
        })
        .collect()
}

fn solve_linear<T: Real>(xs: &[T], targets: &[T], z: T, powers: usize) -> Result<(Vec<T>, T)> {
    let ys: Vec<T> = xs.iter().map(|&x| x.powf(-z)).collect();
    let columns: Vec<Vec<T>> = (0..=powers)
        .map(|n| ys.iter().map(|&y| y.powi(n as i32)).collect())
        .collect();
    least_squares(&columns, targets)
}
