use crate::error::{Result, TfError};
use crate::scalar::{lit, Real};

/// Brent's method for a sign change of `f` on `[a, b]`.
pub fn brent<T: Real, F: FnMut(T) -> Result<T>>(mut f: F, a: T, b: T, xtol: T, max_iter: usize) -> Result<T> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(TfError::Bracket(format!(
            "no sign change on [{a}, {b}] (f = {fa}, {fb})"
        )));
    }
    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::epsilon() * b.abs() + half * xtol;
        let m = half * (c - b);
        if m.abs() <= tol || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (lit::<T>(3.0) * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol { b + d } else { b + tol * m.signum() };
        fb = f(b)?;
    }
    Err(TfError::diverged("Brent root search", format!("{max_iter} iterations")))
}

/// Bisection on a monotone predicate: returns `(lo, hi)` with
/// `pred(lo) == false`, `pred(hi) == true`, narrowed until `hi - lo <= xtol`
/// or the midpoint is no longer representable.
pub fn bisect_predicate<T: Real, P: FnMut(T) -> Result<bool>>(
    mut pred: P,
    mut lo: T,
    mut hi: T,
    xtol: T,
    max_iter: usize,
) -> Result<(T, T)> {
    for _ in 0..max_iter {
        let mid = lo + (hi - lo) * lit(0.5);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            return Ok((lo, hi));
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(TfError::diverged("bisection", format!("{max_iter} iterations, width {}", hi - lo)))
}

/// Minimum of a unimodal `f` on `[a, b]` by golden-section search.
pub fn golden_section<T: Real, F: FnMut(T) -> T>(mut f: F, mut a: T, mut b: T) -> T {
    let g = (lit::<T>(5.0).sqrt() - T::one()) * lit(0.5);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= T::epsilon().sqrt() * lit(1e-2) * (a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    (a + b) * lit(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x: f64| Ok(x * x * x - 2.0), 0.0, 3.0, 1e-15, 200).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn brent_rejects_missing_sign_change() {
        assert!(matches!(
            brent(|x: f64| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 50),
            Err(TfError::Bracket(_))
        ));
    }

    #[test]
    fn predicate_bisection_hits_float_resolution() {
        let (lo, hi) = bisect_predicate(|x: f64| Ok(x > 0.3), 0.0, 1.0, 0.0, 200).unwrap();
        assert!(lo <= 0.3 && hi > 0.3);
        assert!(hi - lo <= 2.0 * f64::EPSILON);
    }
}
