//! Symmetric positive definite banded matrices and their Cholesky factor.

use crate::error::{Result, TfError};
use crate::scalar::Real;

/// Lower band storage: `band[i * (k + 1) + d] = A[i][i - d]`.
#[derive(Debug, Clone)]
pub struct BandedSpd<T> {
    n: usize,
    k: usize,
    band: Vec<T>,
}

impl<T: Real> BandedSpd<T> {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self {
            n,
            k: bandwidth,
            band: vec![T::zero(); n * (bandwidth + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds `v` to `A[i][j]` (and its mirror). Requires `|i - j| <= k`.
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        debug_assert!(d <= self.k, "entry outside band");
        self.band[r * (self.k + 1) + d] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d > self.k {
            T::zero()
        } else {
            self.band[r * (self.k + 1) + d]
        }
    }

    /// `y = A x`.
    pub fn mul(&self, x: &[T]) -> Vec<T> {
        let w = self.k + 1;
        let mut y = vec![T::zero(); self.n];
        for i in 0..self.n {
            y[i] += self.band[i * w] * x[i];
            for d in 1..=self.k.min(i) {
                let a = self.band[i * w + d];
                y[i] += a * x[i - d];
                y[i - d] += a * x[i];
            }
        }
        y
    }

    /// In-place Cholesky `A = L L^T`.
    pub fn cholesky(mut self) -> Result<BandedCholesky<T>> {
        let w = self.k + 1;
        let k = self.k;
        for i in 0..self.n {
            let j0 = i.saturating_sub(k);
            for j in j0..=i {
                // s = A[i][j] - sum_{m < j} L[i][m] L[j][m]
                let mut s = self.band[i * w + (i - j)];
                let m0 = j0.max(j.saturating_sub(k));
                for m in m0..j {
                    s -= self.band[i * w + (i - m)] * self.band[j * w + (j - m)];
                }
                if i == j {
                    if !(s > T::zero()) {
                        return Err(TfError::diverged(
                            "banded Cholesky",
                            format!("matrix not positive definite at row {i}"),
                        ));
                    }
                    self.band[i * w] = s.sqrt();
                } else {
                    self.band[i * w + (i - j)] = s / self.band[j * w];
                }
            }
        }
        Ok(BandedCholesky {
            n: self.n,
            k,
            band: self.band,
        })
    }
}

#[derive(Debug, Clone)]
pub struct BandedCholesky<T> {
    n: usize,
    k: usize,
    band: Vec<T>,
}

impl<T: Real> BandedCholesky<T> {
    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        let w = self.k + 1;
        let mut y = rhs.to_vec();
        for i in 0..self.n {
            let mut s = y[i];
            for m in i.saturating_sub(self.k)..i {
                s -= self.band[i * w + (i - m)] * y[m];
            }
            y[i] = s / self.band[i * w];
        }
        for i in (0..self.n).rev() {
            let mut s = y[i];
            for r in i + 1..(i + self.k + 1).min(self.n) {
                s -= self.band[r * w + (r - i)] * y[r];
            }
            y[i] = s / self.band[i * w];
        }
        y
    }
}
