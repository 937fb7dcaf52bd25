//! Richardson extrapolation and observed convergence order.

use crate::scalar::Real;

/// Extrapolates two estimates computed at step ratio `ratio` (coarse/fine)
/// assuming an error term of the given `order`. Returns the extrapolated value
/// and the magnitude of the correction, which serves as an error estimate.
pub fn extrapolate<T: Real>(coarse: T, fine: T, ratio: T, order: T) -> (T, T) {
    let factor = ratio.powf(order) - T::one();
    let correction = (fine - coarse) / factor;
    (fine + correction, correction.abs())
}

/// Observed order from three estimates at successive refinements by `ratio`.
/// Returns `None` when the differences do not shrink monotonically.
pub fn observed_order<T: Real>(coarse: T, mid: T, fine: T, ratio: T) -> Option<T> {
    let d1 = mid - coarse;
    let d2 = fine - mid;
    if d2 == T::zero() || d1 == T::zero() || d1.signum() != d2.signum() {
        return None;
    }
    let q = d1 / d2;
    if q <= T::one() {
        return None;
    }
    Some(q.ln() / ratio.ln())
}

/// Three-point extrapolation to the limit using the observed order.
/// Falls back to two-point extrapolation with `default_order` when the
/// sequence is not monotone.
pub fn extrapolate_three<T: Real>(coarse: T, mid: T, fine: T, ratio: T, default_order: T) -> (T, T, Option<T>) {
    let p = observed_order(coarse, mid, fine, ratio);
    let (v, e) = extrapolate(mid, fine, ratio, p.unwrap_or(default_order));
    (v, e, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_is_removed() {
        let f = |h: f64| 2.0 + 0.7 * h.powf(1.5);
        let (v, _, p) = extrapolate_three(f(0.4), f(0.2), f(0.1), 2.0, 2.0);
        assert!((p.unwrap() - 1.5).abs() < 1e-10);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn oscillating_sequence_has_no_order() {
        assert!(observed_order(1.0, 1.1, 1.05, 2.0).is_none());
    }
}
