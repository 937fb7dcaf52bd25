//! Dense linear least squares by Householder QR, sized for a handful of
//! columns.

use crate::error::{Result, TfError};
use crate::scalar::Real;

/// Solves `min ||A x - b||` for a column-major `A` (`columns[j][i]`).
/// Returns the coefficients and the residual sum of squares.
pub fn least_squares<T: Real>(columns: &[Vec<T>], rhs: &[T]) -> Result<(Vec<T>, T)> {
    let n = columns.len();
    let m = rhs.len();
    if n == 0 || m < n || columns.iter().any(|c| c.len() != m) {
        return Err(TfError::IllConditioned(format!(
            "{m} observations for {n} parameters"
        )));
    }
    // Column equilibration keeps the rank test scale-free.
    let scale: Vec<T> = columns
        .iter()
        .map(|c| c.iter().map(|v| *v * *v).sum::<T>().sqrt())
        .collect();
    if scale.iter().any(|s| *s == T::zero() || !s.is_finite()) {
        return Err(TfError::IllConditioned("zero or non-finite column".into()));
    }
    let mut a: Vec<Vec<T>> = columns
        .iter()
        .zip(&scale)
        .map(|(c, s)| c.iter().map(|v| *v / *s).collect())
        .collect();
    let mut b = rhs.to_vec();
    for k in 0..n {
        let norm = a[k][k..].iter().map(|v| *v * *v).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(TfError::IllConditioned("rank-deficient design".into()));
        }
        let alpha = if a[k][k] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2 = v.iter().map(|x| *x * *x).sum::<T>();
        if vnorm2 > T::zero() {
            for col in a.iter_mut().skip(k) {
                let dot: T = v.iter().zip(&col[k..]).map(|(p, q)| *p * *q).sum();
                let f = (dot + dot) / vnorm2;
                for (ci, vi) in col[k..].iter_mut().zip(&v) {
                    *ci -= f * *vi;
                }
            }
            let dot: T = v.iter().zip(&b[k..]).map(|(p, q)| *p * *q).sum();
            let f = (dot + dot) / vnorm2;
            for (bi, vi) in b[k..].iter_mut().zip(&v) {
                *bi -= f * *vi;
            }
        }
    }
    let rmax = (0..n).map(|k| a[k][k].abs()).fold(T::zero(), T::max);
    let rmin = (0..n).map(|k| a[k][k].abs()).fold(T::infinity(), T::min);
    if rmin <= rmax * T::epsilon() * T::from_usize(64 * m).unwrap() {
        return Err(TfError::IllConditioned(format!(
            "condition estimate {} exceeds working precision",
            rmax / rmin
        )));
    }
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= a[j][k] * x[j];
        }
        x[k] = s / a[k][k];
    }
    let rss: T = b[n..].iter().map(|v| *v * *v).sum();
    for (xi, s) in x.iter_mut().zip(&scale) {
        *xi /= *s;
    }
    Ok((x, rss))
}
