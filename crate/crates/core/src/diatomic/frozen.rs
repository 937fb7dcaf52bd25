//! Interaction of two unrelaxed atoms in universal units.
//!
//! Both nuclei carry unit charge in the scaled problem `Delta phi =
//! phi^{3/2}`; a Thomas-Fermi atom is `phi(r) = chi(r) / r` with density
//! `phi^{3/2} / (4 pi)`, and energies convert to hartree with `Z^2 lambda`.
//! The molecular energy is bracketed by two superpositions:
//!
//! * the dual (potential) functional at `phi_1 + phi_2` gives the lower bound
//!   `G0 = E_es + T3`,
//! * the primal functional at `rho_1 + rho_2` gives the upper bound
//!   `E_es + dK`,
//!
//! where `E_es` is the electrostatic interaction of the two neutral atoms.

use super::kernels::{cross25, cross53};
use crate::error::Result;
use crate::numerics::quad::{integrate, QuadTol};
use crate::scalar::{lit, Real};
use crate::universal_ode::UniversalSolution;

/// Outer integration limit in units of the separation.
const REACH: f64 = 1000.0;

fn tol<T: Real>(abs: T) -> QuadTol<T> {
    let mut t = QuadTol::new(abs, lit(1e-12));
    t.max_panels = 20_000;
    t
}

fn inner_tol<T: Real>(abs: T) -> QuadTol<T> {
    let mut t = QuadTol::new(abs, lit(1e-13));
    t.max_panels = 20_000;
    t
}

/// A single scaled atom.
#[derive(Clone, Copy)]
pub struct ScaledAtom<'a, T> {
    sol: &'a UniversalSolution<T>,
}

impl<'a, T: Real> ScaledAtom<'a, T> {
    pub fn new(sol: &'a UniversalSolution<T>) -> Self {
        Self { sol }
    }

    pub fn chi(&self, r: T) -> T {
        self.sol.eval(r).0
    }

    /// Total potential `chi(r) / r`.
    pub fn phi(&self, r: T) -> T {
        self.chi(r) / r
    }

    /// Electronic potential `(1 - chi(r)) / r`, finite at the nucleus.
    pub fn sigma(&self, r: T) -> T {
        if r == T::zero() {
            self.sol.origin_slope
        } else {
            (T::one() - self.chi(r)) / r
        }
    }

    /// `4 pi r^2 rho(r) = r^2 phi^{3/2}`.
    pub fn shell_density(&self, r: T) -> T {
        let p = self.phi(r);
        r * r * p * p.sqrt()
    }
}

/// Electrostatic interaction of two neutral atoms a distance `d` apart:
/// `phi(d) - int rho_2 phi_1`. The sphere average of `phi_1` about the second
/// nucleus is written relative to its centre value so the mean-value part
/// cancels analytically.
pub fn electrostatic<T: Real>(atom: ScaledAtom<'_, T>, d: T) -> Result<T> {
    let chi_d = atom.chi(d);
    let two = lit::<T>(2.0);
    // Deviation of the sphere average of phi_1 from phi_1(d), radius r about
    // nucleus 2.
    let deviation = |r: T| -> Result<T> {
        if r <= d {
            let (v, _) = integrate(
                |tau: T| atom.chi(d + tau) + atom.chi(d - tau) - two * chi_d,
                T::zero(),
                r,
                &[],
                // The second difference is at roundoff level for small r.
                inner_tol(lit::<T>(1e-15) * chi_d * r),
            )?;
            Ok(-v / (two * r * d))
        } else {
            let (v, _) = integrate(|t: T| atom.chi(t), r - d, r + d, &[], inner_tol(T::zero()))?;
            Ok(chi_d / d - v / (two * r * d))
        }
    };
    let mut err = None;
    let (v, _) = integrate(
        |s: T| {
            if s == T::zero() {
                return T::zero();
            }
            let r = s * s;
            match deviation(r) {
                Ok(dev) => two * s * atom.shell_density(r) * dev,
                Err(e) => {
                    err.get_or_insert(e);
                    T::nan()
                }
            }
        },
        T::zero(),
        (lit::<T>(REACH) * d.max(T::one())).sqrt(),
        &[d.sqrt()],
        // Floor set by the roundoff of the inner second difference.
        tol(lit::<T>(1e-13) * chi_d / d),
    )
    .map_err(|e| err.take().unwrap_or(e))?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(v)
}

/// Integral over all space of `f(phi_1, phi_2)` for two atoms `d` apart, in
/// bipolar coordinates `d^3x = (2 pi / d) r1 r2 dr1 dr2`, using the symmetry
/// of `f` to restrict to `r1 < r2`.
fn bipolar<T: Real, F: Fn(T, T) -> T>(atom: ScaledAtom<'_, T>, d: T, f: F) -> Result<T> {
    let two = lit::<T>(2.0);
    let half = d / two;
    let mut err = None;
    let (v, _) = integrate(
        |s: T| {
            if s == T::zero() {
                return T::zero();
            }
            let r1 = s * s;
            let p1 = atom.phi(r1);
            let lo = r1.max((d - r1).abs());
            let hi = r1 + d;
            match integrate(|r2: T| r2 * f(p1, atom.phi(r2)), lo, hi, &[], inner_tol(T::zero())) {
                Ok((inner, _)) => two * s * r1 * inner,
                Err(e) => {
                    err.get_or_insert(e);
                    T::nan()
                }
            }
        },
        T::zero(),
        (lit::<T>(REACH) * d.max(T::one())).sqrt(),
        &[half.sqrt(), d.sqrt()],
        tol(T::min_positive_value()),
    )
    .map_err(|e| err.take().unwrap_or(e))?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(two * two * T::PI() / d * v)
}

/// Dual correction `-(1/10pi) int [Phi^{5/2} - sum phi_k^{5/2} - (5/2) sum phi_k^{3/2} phi_l]`.
pub fn dual_kinetic<T: Real>(atom: ScaledAtom<'_, T>, d: T) -> Result<T> {
    let v = bipolar(atom, d, cross25)?;
    Ok(-v / (lit::<T>(10.0) * T::PI()))
}

/// Kinetic energy change of the superposed density,
/// `(3/5)(4 pi)^{2/3} int [(rho_1 + rho_2)^{5/3} - rho_1^{5/3} - rho_2^{5/3}]`.
pub fn superposition_kinetic<T: Real>(atom: ScaledAtom<'_, T>, d: T) -> Result<T> {
    let v = bipolar(atom, d, cross53)?;
    Ok(lit::<T>(3.0) / (lit::<T>(20.0) * T::PI()) * v)
}

/// Frozen-atom bounds on the scaled gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrozenBounds<T = f64> {
    pub electrostatic: T,
    /// Dual bound `G0`; the relaxed gap is never below it.
    pub lower: T,
    /// Superposition-density bound; the relaxed gap is never above it.
    pub upper: T,
}

pub fn frozen_bounds<T: Real>(sol: &UniversalSolution<T>, d: T) -> Result<FrozenBounds<T>> {
    let atom = ScaledAtom::new(sol);
    let es = electrostatic(atom, d)?;
    Ok(FrozenBounds {
        electrostatic: es,
        lower: es + dual_kinetic(atom, d)?,
        upper: es + superposition_kinetic(atom, d)?,
    })
}
