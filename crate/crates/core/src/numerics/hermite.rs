//! Piecewise quintic Hermite interpolation from values and first and second
//! derivatives at the nodes.

use crate::scalar::{lit, Real};

/// Node data: abscissa and (f, f', f'').
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knot<T> {
    pub x: T,
    pub f: T,
    pub df: T,
    pub d2f: T,
}

/// Evaluates the quintic Hermite segment between `a` and `b` at `x`,
/// returning (f, f', f'').
pub fn quintic<T: Real>(a: &Knot<T>, b: &Knot<T>, x: T) -> (T, T, T) {
    let h = b.x - a.x;
    let s = (x - a.x) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    let c = |v: f64| -> T { lit(v) };
    let half = c(0.5);

    let h0 = T::one() - c(10.0) * s3 + c(15.0) * s4 - c(6.0) * s5;
    let h1 = s - c(6.0) * s3 + c(8.0) * s4 - c(3.0) * s5;
    let h2 = (s2 - c(3.0) * s3 + c(3.0) * s4 - s5) * half;
    let h3 = c(10.0) * s3 - c(15.0) * s4 + c(6.0) * s5;
    let h4 = -c(4.0) * s3 + c(7.0) * s4 - c(3.0) * s5;
    let h5 = (s3 - c(2.0) * s4 + s5) * half;

    let d0 = -c(30.0) * s2 + c(60.0) * s3 - c(30.0) * s4;
    let d1 = T::one() - c(18.0) * s2 + c(32.0) * s3 - c(15.0) * s4;
    let d2 = (c(2.0) * s - c(9.0) * s2 + c(12.0) * s3 - c(5.0) * s4) * half;
    let d3 = -d0;
    let d4 = -c(12.0) * s2 + c(28.0) * s3 - c(15.0) * s4;
    let d5 = (c(3.0) * s2 - c(8.0) * s3 + c(5.0) * s4) * half;

    let e0 = -c(60.0) * s + c(180.0) * s2 - c(120.0) * s3;
    let e1 = -c(36.0) * s + c(96.0) * s2 - c(60.0) * s3;
    let e2 = (c(2.0) - c(18.0) * s + c(36.0) * s2 - c(20.0) * s3) * half;
    let e3 = -e0;
    let e4 = -c(24.0) * s + c(84.0) * s2 - c(60.0) * s3;
    let e5 = (c(6.0) * s - c(24.0) * s2 + c(20.0) * s3) * half;

    let (fa, ga, ka) = (a.f, a.df * h, a.d2f * h * h);
    let (fb, gb, kb) = (b.f, b.df * h, b.d2f * h * h);
    let f = fa * h0 + ga * h1 + ka * h2 + fb * h3 + gb * h4 + kb * h5;
    let df = (fa * d0 + ga * d1 + ka * d2 + fb * d3 + gb * d4 + kb * d5) / h;
    let d2f = (fa * e0 + ga * e1 + ka * e2 + fb * e3 + gb * e4 + kb * e5) / (h * h);
    (f, df, d2f)
}

/// Sorted knot table with binary-search lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteTable<T> {
    knots: Vec<Knot<T>>,
}

impl<T: Real> HermiteTable<T> {
    /// `knots` must be strictly increasing in `x` and hold at least two entries.
    pub fn new(knots: Vec<Knot<T>>) -> Self {
        assert!(knots.len() >= 2, "Hermite table needs two knots");
        debug_assert!(knots.windows(2).all(|w| w[0].x < w[1].x));
        Self { knots }
    }

    pub fn knots(&self) -> &[Knot<T>] {
        &self.knots
    }

    pub fn x_min(&self) -> T {
        self.knots[0].x
    }

    pub fn x_max(&self) -> T {
        self.knots[self.knots.len() - 1].x
    }

    /// Interpolates at `x`, clamping to the table's range.
    pub fn eval(&self, x: T) -> (T, T, T) {
        let n = self.knots.len();
        let i = self.knots.partition_point(|k| k.x <= x);
        let i = i.clamp(1, n - 1);
        let a = &self.knots[i - 1];
        let b = &self.knots[i];
        if x <= a.x && i == 1 {
            return (a.f, a.df, a.d2f);
        }
        if x >= b.x {
            return (b.f, b.df, b.d2f);
        }
        quintic(a, b, x)
    }
}
