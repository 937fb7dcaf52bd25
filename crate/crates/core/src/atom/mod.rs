//! Physical atoms and positive ions from the universal screening function.

mod energy;
mod ion;
mod ionization;

use crate::error::{Result, TfError};
use crate::scalar::{lit, Real};
use crate::units::BOHR_PM;
use crate::universal_ode::UniversalSolution;

pub use energy::{energy_ion, energy_ion_from_slope, energy_neutral, energy_neutral_from_slope, EnergyBreakdown};
pub use ion::{solve_ion, IonicSolution};
pub use ionization::{a_tf_estimate, ionization, ionization_direct, ATfEstimate};

/// Nuclear charge and electron number of a neutral atom or positive ion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSpec<T = f64> {
    pub nuclear_charge: T,
    pub electron_number: T,
}

impl<T: Real> AtomSpec<T> {
    pub fn new(nuclear_charge: T, electron_number: T) -> Result<Self> {
        if !(nuclear_charge > T::zero() && nuclear_charge.is_finite()) {
            return Err(TfError::arg(format!("nuclear charge must be positive, got {nuclear_charge}")));
        }
        if !(electron_number > T::zero()) {
            return Err(TfError::arg(format!("electron number must be positive, got {electron_number}")));
        }
        if electron_number > nuclear_charge {
            return Err(TfError::arg(format!(
                "N = {electron_number} exceeds Z = {nuclear_charge}: negative ions are unstable"
            )));
        }
        Ok(Self {
            nuclear_charge,
            electron_number,
        })
    }

    pub fn neutral(nuclear_charge: T) -> Result<Self> {
        Self::new(nuclear_charge, nuclear_charge)
    }

    /// Net charge fraction `q = (Z - N) / Z`.
    pub fn charge_fraction(&self) -> T {
        (self.nuclear_charge - self.electron_number) / self.nuclear_charge
    }
}

/// `2^{7/3} (3 pi)^{-2/3}`, the inverse of the Thomas-Fermi length at `Z = 1`.
pub fn scale_constant<T: Real>() -> T {
    lit::<T>(2.0).powf(lit(7.0 / 3.0)) * (lit::<T>(3.0) * T::PI()).powf(lit(-2.0 / 3.0))
}

/// Inverse length `lambda = 2^{7/3} (3 pi)^{-2/3} Z^{1/3}` mapping bohr to
/// the universal radius `x = lambda r`.
pub fn length_scale<T: Real>(z: T) -> T {
    scale_constant::<T>() * z.cbrt()
}

fn check_charge<T: Real>(z: T) -> Result<()> {
    if z > T::zero() && z.is_finite() {
        Ok(())
    } else {
        Err(TfError::arg(format!("nuclear charge must be positive, got {z}")))
    }
}

fn check_r<T: Real>(r: T) -> Result<()> {
    if r > T::zero() {
        Ok(())
    } else {
        Err(TfError::arg(format!("radius must be positive (potential is singular at the nucleus), got {r}")))
    }
}

/// Electrostatic potential of the neutral atom in hartree at `r` bohr,
/// `A phi0(lambda r)` with `A = lambda Z`.
pub fn tf_potential<T: Real>(sol: &UniversalSolution<T>, z: T, r: T) -> Result<T> {
    check_charge(z)?;
    check_r(r)?;
    let x = length_scale(z) * r;
    Ok(z * sol.eval(x).0 / r)
}

/// Electron density `(2 phi)^{3/2} / (3 pi^2)` in bohr^-3.
pub fn tf_density<T: Real>(sol: &UniversalSolution<T>, z: T, r: T) -> Result<T> {
    let phi = tf_potential(sol, z, r)?;
    Ok(density_from_potential(phi))
}

pub(crate) fn density_from_potential<T: Real>(phi: T) -> T {
    let two_phi = (phi + phi).max(T::zero());
    two_phi * two_phi.sqrt() / (lit::<T>(3.0) * T::PI() * T::PI())
}

/// Radius outside of which `m` electrons remain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusResult<T = f64> {
    pub radius_bohr: T,
    pub radius_pm: T,
    pub scaled_x: T,
    pub m: T,
}

pub fn radius<T: Real>(sol: &UniversalSolution<T>, z: T, m: T) -> Result<RadiusResult<T>> {
    check_charge(z)?;
    if !(m > T::zero()) {
        return Err(TfError::arg(format!("m = {m} must be positive (the radius is infinite for m <= 0)")));
    }
    if m > z {
        return Err(TfError::arg(format!("m = {m} exceeds Z = {z}")));
    }
    let scaled_x = sol.invert_fraction(m / z)?;
    let radius_bohr = scaled_x / length_scale(z);
    Ok(RadiusResult {
        radius_bohr,
        radius_pm: radius_bohr * lit(BOHR_PM),
        scaled_x,
        m,
    })
}

/// Large-Z limit of `R_m(Z) m^{1/3}`: `(81 pi^2 / 2)^{1/3}` bohr.
pub fn b_tf_constant() -> f64 {
    (81.0 * std::f64::consts::PI.powi(2) / 2.0).cbrt()
}

#[cfg(test)]
mod tests;
