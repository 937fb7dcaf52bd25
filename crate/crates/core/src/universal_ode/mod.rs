//! The universal screening function `chi(x)`: the solution of
//! `chi'' = chi^{3/2} / sqrt(x)` with `chi(0) = 1` that vanishes at infinity.

mod series;
mod solver;
pub(crate) mod table;
mod tail;

use std::io::Write;
use std::path::Path;

use crate::error::{Result, TfError};
use crate::numerics::roots::brent;
use crate::scalar::{lit, Real};

pub use series::OriginSeries;
pub use tail::{fit_sommerfeld, sommerfeld_coefficient, sommerfeld_exponent, SommerfeldTail};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T = f64> {
    /// Local error target of the integrator.
    pub abs_tolerance: T,
    /// Below this radius the origin series is evaluated directly.
    pub series_cutoff: T,
    /// Start of the window used to fit the asymptotic tail.
    pub tail_cutoff: T,
    /// End of the tabulated range; the fitted tail is used beyond it.
    pub max_range: T,
    /// Width at which the origin-slope bracket is accepted.
    pub bisection_tolerance: T,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            abs_tolerance: lit(1e-12),
            series_cutoff: lit(1e-4),
            tail_cutoff: lit(40.0),
            max_range: lit(1e3),
            bisection_tolerance: lit(1e-13),
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn with_tolerance(mut self, tol: T) -> Self {
        self.abs_tolerance = tol;
        self
    }

    pub fn with_max_range(mut self, max_range: T) -> Self {
        self.max_range = max_range;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.abs_tolerance,
            self.series_cutoff,
            self.tail_cutoff,
            self.max_range,
            self.bisection_tolerance,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(TfError::InvalidConfig("all fields must be finite".into()));
        }
        if !(self.abs_tolerance > T::zero() && self.bisection_tolerance > T::zero()) {
            return Err(TfError::InvalidConfig("tolerances must be strictly positive".into()));
        }
        if !(T::zero() < self.series_cutoff
            && self.series_cutoff < self.tail_cutoff
            && self.tail_cutoff < self.max_range)
        {
            return Err(TfError::InvalidConfig(format!(
                "need 0 < series_cutoff ({}) < tail_cutoff ({}) < max_range ({})",
                self.series_cutoff, self.tail_cutoff, self.max_range
            )));
        }
        Ok(())
    }
}

/// One tabulated point of the solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node<T = f64> {
    pub x: T,
    pub chi: T,
    pub chi_prime: T,
}

/// How the solution was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingReport<T = f64> {
    /// Final origin-slope bracket (too shallow, too steep).
    pub bracket: (T, T),
    pub iterations: usize,
    /// Radius where the outward solution hands over to the inward family.
    pub match_x: T,
    /// Jump in `chi'` across the hand-over point.
    pub derivative_mismatch: T,
    /// Origin slope implied by the inward family alone.
    pub inward_origin_slope: T,
    /// Sommerfeld correction amplitude implied by the inward family.
    pub asymptotic_amplitude: T,
}

#[derive(Debug, Clone)]
pub struct UniversalSolution<T = f64> {
    pub origin_slope: T,
    pub nodes: Vec<Node<T>>,
    pub tail: SommerfeldTail<T>,
    pub config: SolverConfig<T>,
    series: OriginSeries<T>,
    table: table::StateTable<T>,
    report: ShootingReport<T>,
}

/// Computes the critical solution by bisection on the origin slope.
pub fn solve_universal<T: Real>(config: SolverConfig<T>) -> Result<UniversalSolution<T>> {
    solver::solve(config)
}

fn check_radius<T: Real>(x: T) -> Result<()> {
    if x >= T::zero() {
        Ok(())
    } else {
        Err(TfError::arg(format!("radius must be non-negative, got {x}")))
    }
}

impl<T: Real> UniversalSolution<T> {
    pub fn report(&self) -> &ShootingReport<T> {
        &self.report
    }

    pub fn series(&self) -> &OriginSeries<T> {
        &self.series
    }

    /// `(chi, chi', chi'')` for `x >= 0` without argument checks.
    pub(crate) fn eval(&self, x: T) -> (T, T, T) {
        if x < self.config.series_cutoff {
            self.series.eval(x)
        } else if x <= self.config.max_range {
            self.table.eval(x)
        } else {
            let (c, d) = self.tail.eval(x);
            (c, d, c.max(T::zero()).powf(lit(1.5)) / x.sqrt())
        }
    }

    pub fn chi(&self, x: T) -> Result<T> {
        check_radius(x)?;
        Ok(self.eval(x).0)
    }

    pub fn chi_prime(&self, x: T) -> Result<T> {
        check_radius(x)?;
        Ok(self.eval(x).1)
    }

    /// Second derivative from the interpolant (infinite at the origin).
    pub fn chi_second(&self, x: T) -> Result<T> {
        check_radius(x)?;
        Ok(self.eval(x).2)
    }

    /// `F(x) = chi - x chi'`: the fraction of the electrons outside `x`.
    pub fn fraction_outside(&self, x: T) -> Result<T> {
        check_radius(x)?;
        let (c, d, _) = self.eval(x);
        Ok(c - x * d)
    }

    /// The radius `x` with `F(x) = f`.
    pub fn invert_fraction(&self, f: T) -> Result<T> {
        if !(f > T::zero()) {
            return Err(TfError::arg(format!(
                "fraction {f} has no finite radius (need f > 0)"
            )));
        }
        if f > T::one() {
            return Err(TfError::arg(format!(
                "fraction {f} exceeds the number of electrons (need f <= 1)"
            )));
        }
        if f == T::one() {
            return Ok(T::zero());
        }
        let outside = |x: T| {
            let (c, d, _) = self.eval(x);
            c - x * d
        };
        let mut hi = T::one();
        while outside(hi) > f {
            hi *= lit(4.0);
            if !hi.is_finite() {
                return Err(TfError::arg(format!("fraction {f} is below the representable range")));
            }
        }
        brent(|x| Ok(outside(x) - f), T::zero(), hi, T::zero(), 300)
    }

    /// Fits the Sommerfeld tail to the tabulated solution on `window`.
    pub fn fit_tail(&self, window: (T, T)) -> Result<SommerfeldTail<T>> {
        solver::fit_window(self, window)
    }

    /// Writes the node table as CSV with columns `x,chi,chi_prime`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["x", "chi", "chi_prime"])?;
        for n in &self.nodes {
            w.write_record([sci17(n.x), sci17(n.chi), sci17(n.chi_prime)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn dump_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// 17 significant digits in scientific notation.
pub(crate) fn sci17<T: Real>(v: T) -> String {
    format!("{:.16e}", v.as_f64())
}

#[cfg(test)]
mod tests;
