//! Cancellation-free forms of the nonlinear terms. All potentials are
//! non-negative on entry.

use crate::scalar::{lit, Real};

/// `(1 + e)_+^{5/2} - 1 - (5/2) e`.
pub fn h<T: Real>(e: T) -> T {
    if e <= -T::one() {
        return -T::one() - lit::<T>(2.5) * e;
    }
    if e.abs() < lit(1e-3) {
        let c2 = lit::<T>(15.0 / 8.0);
        let c3 = lit::<T>(5.0 / 16.0);
        let c4 = lit::<T>(-5.0 / 128.0);
        let c5 = lit::<T>(3.0 / 256.0);
        return e * e * (c2 + e * (c3 + e * (c4 + e * c5)));
    }
    (lit::<T>(2.5) * e.ln_1p()).exp_m1() - lit::<T>(2.5) * e
}

/// `(1 + e)_+^{p} - 1`.
pub fn pow_m1<T: Real>(e: T, p: T) -> T {
    if e <= -T::one() {
        -T::one()
    } else {
        (p * e.ln_1p()).exp_m1()
    }
}

/// `(a + b)^{3/2} - a^{3/2} - b^{3/2}`.
pub fn cross15<T: Real>(a: T, b: T) -> T {
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if small <= T::zero() {
        return T::zero();
    }
    let e = small / big;
    big * big.sqrt() * (pow_m1(e, lit(1.5)) - e * e.sqrt())
}

/// `(a + b)^{5/2} - a^{5/2} - b^{5/2} - (5/2)(a^{3/2} b + b^{3/2} a)`.
pub fn cross25<T: Real>(a: T, b: T) -> T {
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if small <= T::zero() {
        return T::zero();
    }
    let e = small / big;
    let re = e.sqrt();
    big * big * big.sqrt() * (h(e) - e * e * re - lit::<T>(2.5) * e * re)
}

/// `(x + y)^{5/3} - x^{5/3} - y^{5/3}` with `x = a^{3/2}`, `y = b^{3/2}`.
pub fn cross53<T: Real>(a: T, b: T) -> T {
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if small <= T::zero() {
        return T::zero();
    }
    let x = big * big.sqrt();
    let eta = small * small.sqrt() / x;
    x.powf(lit(5.0 / 3.0)) * (pow_m1(eta, lit(5.0 / 3.0)) - eta.powf(lit(5.0 / 3.0)))
}
