//! Dense representation of a solution in `t = sqrt(x)`, where both `u` and
//! `p = du/dx` are smooth. Each is interpolated by quintic Hermite
//! polynomials with derivatives taken from the equation itself.

use crate::numerics::hermite::{HermiteTable, Knot};
use crate::scalar::{lit, Real};

/// `(t, u, p)` on a solution trajectory.
pub(crate) type State<T> = (T, T, T);

#[derive(Debug, Clone)]
pub(crate) struct StateTable<T> {
    u: HermiteTable<T>,
    p: HermiteTable<T>,
}

fn knots<T: Real>(&(t, u, p): &State<T>) -> (Knot<T>, Knot<T>) {
    let two = lit::<T>(2.0);
    let up = u.max(T::zero());
    let root = up.sqrt();
    let u_t = two * t * p;
    let p_t = two * up * root;
    (
        Knot {
            x: t,
            f: u,
            df: u_t,
            d2f: two * p + two * t * p_t,
        },
        Knot {
            x: t,
            f: p,
            df: p_t,
            d2f: lit::<T>(3.0) * root * u_t,
        },
    )
}

impl<T: Real> StateTable<T> {
    /// Builds the table from states ordered by increasing `t`.
    pub fn new(states: &[State<T>]) -> Self {
        let (u, p): (Vec<_>, Vec<_>) = states.iter().map(knots).unzip();
        Self {
            u: HermiteTable::new(u),
            p: HermiteTable::new(p),
        }
    }

    pub fn x_max(&self) -> T {
        let t = self.u.x_max();
        t * t
    }

    pub fn states(&self) -> impl Iterator<Item = State<T>> + '_ {
        self.u.knots().iter().zip(self.p.knots()).map(|(a, b)| (a.x, a.f, b.f))
    }

    pub fn value(&self, x: T) -> T {
        self.u.eval(x.sqrt()).0
    }

    /// `(u, du/dx, d2u/dx2)` at `x > 0`.
    pub fn eval(&self, x: T) -> (T, T, T) {
        let t = x.sqrt();
        let u = self.u.eval(t).0;
        let (p, p_t, _) = self.p.eval(t);
        (u, p, p_t / (t + t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_a_power_law_solution() {
        // u = 144 / x^3 solves the equation exactly.
        let states: Vec<State<f64>> = (0..1000)
            .map(|i| {
                let t = 3.0 + 0.01 * i as f64;
                let x = t * t;
                (t, 144.0 / x.powi(3), -432.0 / x.powi(4))
            })
            .collect();
        let table = StateTable::new(&states);
        let x = 20.123;
        let (u, p, d2) = table.eval(x);
        assert!((u / (144.0 / x.powi(3)) - 1.0).abs() < 1e-10);
        assert!((p / (-432.0 / x.powi(4)) - 1.0).abs() < 1e-10);
        assert!((d2 / (1728.0 / x.powi(5)) - 1.0).abs() < 1e-9);
    }
}
