//! Dormand-Prince 5(4) with step-size control, for small fixed-size systems.

use crate::error::{Result, TfError};
use crate::scalar::{lit, Real};

/// One accepted step, handed to the observer. `f0`/`f1` are the right-hand
/// sides at the step ends so the observer can build a cubic Hermite segment.
#[derive(Debug, Clone, Copy)]
pub struct Step<T, const N: usize> {
    pub t0: T,
    pub y0: [T; N],
    pub f0: [T; N],
    pub t1: T,
    pub y1: [T; N],
    pub f1: [T; N],
}

/// Observer verdict after each accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri5<T> {
    pub rtol: T,
    pub atol: T,
    /// Upper bound on |h|; zero means unbounded.
    pub h_max: T,
    pub h_init: T,
    pub max_steps: usize,
}

impl<T: Real> Dopri5<T> {
    pub fn new(rtol: T, atol: T) -> Self {
        Self {
            rtol,
            atol,
            h_max: T::zero(),
            h_init: T::zero(),
            max_steps: 2_000_000,
        }
    }

    pub fn with_h_init(mut self, h: T) -> Self {
        self.h_init = h.abs();
        self
    }

    pub fn with_h_max(mut self, h: T) -> Self {
        self.h_max = h.abs();
        self
    }

    /// Integrates `y' = f(t, y)` from `t0` toward `t_end` (either direction).
    /// Returns the final time and state, which differ from `t_end` only when
    /// the observer stopped the integration.
    pub fn integrate<const N: usize, F, O>(
        &self,
        mut f: F,
        t0: T,
        y0: [T; N],
        t_end: T,
        mut observer: O,
    ) -> Result<(T, [T; N])>
    where
        F: FnMut(T, &[T; N]) -> [T; N],
        O: FnMut(&Step<T, N>) -> Flow,
    {
        let dir = if t_end >= t0 { T::one() } else { -T::one() };
        let span = (t_end - t0).abs();
        if span == T::zero() {
            return Ok((t0, y0));
        }
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        let mut h = if self.h_init > T::zero() {
            self.h_init.min(span)
        } else {
            self.initial_step(&y, &k1, span)
        };
        if self.h_max > T::zero() {
            h = h.min(self.h_max);
        }
        let safety = lit::<T>(0.9);
        let min_fac = lit::<T>(0.2);
        let max_fac = lit::<T>(5.0);
        let exponent = lit::<T>(-0.2);
        let tiny = T::epsilon() * lit(16.0);

        for _ in 0..self.max_steps {
            let remaining = (t_end - t).abs();
            if remaining <= tiny * t.abs().max(T::one()) {
                return Ok((t, y));
            }
            let mut last = false;
            if h >= remaining {
                h = remaining;
                last = true;
            }
            let hs = h * dir;
            let (y1, k7, err) = self.trial(&mut f, t, &y, &k1, hs);
            if !err.is_finite() || err > T::one() {
                let fac = if err.is_finite() {
                    (safety * err.powf(exponent)).max(min_fac)
                } else {
                    lit(0.1)
                };
                h *= fac;
                if h <= tiny * t.abs().max(T::one()) {
                    return Err(TfError::diverged(
                        "Runge-Kutta integrator",
                        format!("step size underflow at t = {t}"),
                    ));
                }
                continue;
            }
            let t1 = if last { t_end } else { t + hs };
            let step = Step {
                t0: t,
                y0: y,
                f0: k1,
                t1,
                y1,
                f1: k7,
            };
            t = t1;
            y = y1;
            k1 = k7;
            if observer(&step) == Flow::Stop || last {
                return Ok((t, y));
            }
            let fac = if err == T::zero() {
                max_fac
            } else {
                (safety * err.powf(exponent)).max(min_fac).min(max_fac)
            };
            h *= fac;
            if self.h_max > T::zero() {
                h = h.min(self.h_max);
            }
        }
        Err(TfError::diverged(
            "Runge-Kutta integrator",
            format!("step budget {} exhausted at t = {t}", self.max_steps),
        ))
    }

    fn initial_step<const N: usize>(&self, y: &[T; N], f: &[T; N], span: T) -> T {
        let mut d0 = T::zero();
        let mut d1 = T::zero();
        for i in 0..N {
            let sc = self.atol + self.rtol * y[i].abs();
            d0 = d0.max((y[i] / sc).abs());
            d1 = d1.max((f[i] / sc).abs());
        }
        let h = if d0 < lit(1e-5) || d1 < lit(1e-5) {
            lit(1e-6)
        } else {
            lit::<T>(0.01) * d0 / d1
        };
        h.min(span * lit(0.01))
    }

    fn trial<const N: usize, F>(&self, f: &mut F, t: T, y: &[T; N], k1: &[T; N], h: T) -> ([T; N], [T; N], T)
    where
        F: FnMut(T, &[T; N]) -> [T; N],
    {
        let c = |x: f64| -> T { lit(x) };
        let stage = |coef: &[(f64, &[T; N])]| -> [T; N] {
            let mut out = *y;
            for (a, k) in coef {
                let a = h * c(*a);
                for i in 0..N {
                    out[i] += a * k[i];
                }
            }
            out
        };
        let k2 = f(t + h * c(1.0 / 5.0), &stage(&[(1.0 / 5.0, k1)]));
        let k3 = f(t + h * c(3.0 / 10.0), &stage(&[(3.0 / 40.0, k1), (9.0 / 40.0, &k2)]));
        let k4 = f(
            t + h * c(4.0 / 5.0),
            &stage(&[(44.0 / 45.0, k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)]),
        );
        let k5 = f(
            t + h * c(8.0 / 9.0),
            &stage(&[
                (19372.0 / 6561.0, k1),
                (-25360.0 / 2187.0, &k2),
                (64448.0 / 6561.0, &k3),
                (-212.0 / 729.0, &k4),
            ]),
        );
        let k6 = f(
            t + h,
            &stage(&[
                (9017.0 / 3168.0, k1),
                (-355.0 / 33.0, &k2),
                (46732.0 / 5247.0, &k3),
                (49.0 / 176.0, &k4),
                (-5103.0 / 18656.0, &k5),
            ]),
        );
        let y1 = stage(&[
            (35.0 / 384.0, k1),
            (500.0 / 1113.0, &k3),
            (125.0 / 192.0, &k4),
            (-2187.0 / 6784.0, &k5),
            (11.0 / 84.0, &k6),
        ]);
        let k7 = f(t + h, &y1);
        let e = [
            71.0 / 57600.0,
            0.0,
            -71.0 / 16695.0,
            71.0 / 1920.0,
            -17253.0 / 339200.0,
            22.0 / 525.0,
            -1.0 / 40.0,
        ];
        let ks = [k1, &k2, &k3, &k4, &k5, &k6, &k7];
        let mut acc = T::zero();
        for i in 0..N {
            let mut ei = T::zero();
            for (ej, k) in e.iter().zip(ks.iter()) {
                ei += c(*ej) * k[i];
            }
            let sc = self.atol + self.rtol * y[i].abs().max(y1[i].abs());
            let r = h * ei / sc;
            acc += r * r;
        }
        let err = (acc / T::from_usize(N).unwrap()).sqrt();
        (y1, k7, err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_reaches_tolerance() {
        let solver = Dopri5::new(1e-12, 1e-14);
        let mut steps = 0;
        let (t, y) = solver
            .integrate(
                |_t, y: &[f64; 2]| [y[1], -y[0]],
                0.0,
                [0.0, 1.0],
                10.0,
                |_| {
                    steps += 1;
                    Flow::Continue
                },
            )
            .unwrap();
        assert_eq!(t, 10.0);
        assert!((y[0] - 10f64.sin()).abs() < 1e-10);
        assert!((y[1] - 10f64.cos()).abs() < 1e-10);
        assert!(steps > 10);
    }

    #[test]
    fn backward_integration_and_observer_stop() {
        let solver = Dopri5::new(1e-10, 1e-12);
        let (t, y) = solver
            .integrate(
                |_t, y: &[f64; 1]| [y[0]],
                2.0,
                [1.0],
                0.0,
                |s| if s.y1[0] < 0.5 { Flow::Stop } else { Flow::Continue },
            )
            .unwrap();
        assert!(t < 2.0 - 0.69 && t > 0.0);
        assert!((y[0] - (t - 2.0).exp()).abs() < 1e-9);
    }
}
