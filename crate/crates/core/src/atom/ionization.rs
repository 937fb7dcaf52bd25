//! Ionization energies and their large-Z limit.

use rayon::prelude::*;

use super::ion::EdgeShooter;
use super::{check_charge, energy_ion, energy_neutral, length_scale, solve_ion, AtomSpec};
use crate::error::{Result, TfError};
use crate::numerics::quad::{integrate, QuadTol};
use crate::numerics::richardson::extrapolate;
use crate::scalar::{lit, Real};
use crate::universal_ode::{sommerfeld_exponent, SolverConfig, UniversalSolution};

fn check_removal<T: Real>(z: T, m: T) -> Result<()> {
    check_charge(z)?;
    if !(m >= T::zero()) {
        return Err(TfError::arg(format!("m = {m} must be non-negative")));
    }
    if m >= z {
        return Err(TfError::arg(format!("m = {m} must be below Z = {z}")));
    }
    Ok(())
}

/// `I_m(Z) = E(Z - m, Z) - E(Z)` in hartree, from `dE/dN = -mu`:
/// `I_m = Z^2 lambda * int_0^{m/Z} q / x_c(q) dq`.
pub fn ionization<T: Real>(config: &SolverConfig<T>, z: T, m: T) -> Result<T> {
    check_removal(z, m)?;
    config.validate()?;
    if m == T::zero() {
        return Ok(T::zero());
    }
    let edge = EdgeShooter::new(config);
    let three = lit::<T>(3.0);
    // q = s^3 removes the q^{4/3} behaviour at the lower limit.
    let mut failure = None;
    let (integral, _) = integrate(
        |s: T| {
            if s == T::zero() {
                return T::zero();
            }
            let q = s * s * s;
            match edge.cutoff(q) {
                Ok(xc) => three * s * s * q / xc,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::nan()
                }
            }
        },
        T::zero(),
        (m / z).cbrt(),
        &[],
        QuadTol::new(T::min_positive_value(), lit(1e-10)),
    )
    .map_err(|e| failure.take().unwrap_or(e))?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(z * z * length_scale(z) * integral)
}

/// `I_m(Z)` as the difference of two directly integrated energies. Only
/// well conditioned while `m / Z` is not small.
pub fn ionization_direct<T: Real>(config: &SolverConfig<T>, neutral: &UniversalSolution<T>, z: T, m: T) -> Result<T> {
    check_removal(z, m)?;
    if m == T::zero() {
        return Ok(T::zero());
    }
    let ion = solve_ion(config, AtomSpec::new(z, z - m)?)?;
    Ok(energy_ion(&ion)?.total - energy_neutral(neutral, z)?.total)
}

/// Large-Z extrapolation of `I_m(Z) / m^{7/3}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ATfEstimate<T = f64> {
    /// Mean over `m` of the extrapolated limits.
    pub value: T,
    pub m_values: Vec<T>,
    pub z_values: Vec<T>,
    /// `ratios[i][j] = I_{m_j}(Z_i) / m_j^{7/3}`.
    pub ratios: Vec<Vec<T>>,
    /// Extrapolated limit for each `m`.
    pub per_m: Vec<T>,
    /// Convergence order in `1/Z` used for each `m`.
    pub orders: Vec<T>,
    /// `(max - min) / mean` of the raw ratios at each `Z`.
    pub spread_by_z: Vec<T>,
    /// `(max - min) / mean` of the extrapolated limits.
    pub spread: T,
}

pub fn a_tf_estimate<T: Real>(config: &SolverConfig<T>, m_values: &[T], z_values: &[T]) -> Result<ATfEstimate<T>> {
    if m_values.is_empty() || z_values.len() < 2 {
        return Err(TfError::arg("need at least one m and two Z values"));
    }
    if z_values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(TfError::arg("Z values must be increasing"));
    }
    let m_max = m_values.iter().copied().fold(T::zero(), T::max);
    if !(z_values[0] > m_max) {
        return Err(TfError::arg(format!("smallest Z {} must exceed the largest m {m_max}", z_values[0])));
    }
    let seven_thirds = lit::<T>(7.0 / 3.0);
    let jobs: Vec<(usize, usize)> = (0..z_values.len())
        .flat_map(|i| (0..m_values.len()).map(move |j| (i, j)))
        .collect();
    let values: Vec<T> = jobs
        .par_iter()
        .map(|&(i, j)| ionization(config, z_values[i], m_values[j]).map(|e| e / m_values[j].powf(seven_thirds)))
        .collect::<Result<_>>()?;
    let ratios: Vec<Vec<T>> = values.chunks(m_values.len()).map(|c| c.to_vec()).collect();
    let spread = |v: &[T]| {
        let mean = v.iter().copied().sum::<T>() / T::from_usize(v.len()).unwrap();
        let hi = v.iter().copied().fold(T::neg_infinity(), T::max);
        let lo = v.iter().copied().fold(T::infinity(), T::min);
        (hi - lo) / mean
    };
    let spread_by_z: Vec<T> = ratios.iter().map(|r| spread(r)).collect();
    if m_values.len() > 1 && spread_by_z.last().unwrap() >= spread_by_z.first().unwrap() {
        return Err(TfError::diverged(
            "a_TF extrapolation",
            format!("spread across m does not shrink with Z: {spread_by_z:?}"),
        ));
    }
    // Corrections scale like (m / Z)^{zeta / 3}, the power with which the ion
    // edge approaches the neutral tail.
    let default_order = sommerfeld_exponent::<T>() / lit(3.0);
    let n = z_values.len();
    let mut per_m = Vec::with_capacity(m_values.len());
    let mut orders = Vec::with_capacity(m_values.len());
    for j in 0..m_values.len() {
        let col: Vec<T> = ratios.iter().map(|r| r[j]).collect();
        let ratio = z_values[n - 1] / z_values[n - 2];
        let mut order = default_order;
        if n >= 3 {
            let geometric = (z_values[n - 2] / z_values[n - 3] - ratio).abs() <= lit::<T>(1e-9) * ratio;
            let (d1, d2) = (col[n - 2] - col[n - 3], col[n - 1] - col[n - 2]);
            if geometric && d1 != T::zero() && d2 != T::zero() && d1.signum() == d2.signum() && d1.abs() > d2.abs() {
                order = (d1 / d2).ln() / ratio.ln();
            }
        }
        per_m.push(extrapolate(col[n - 2], col[n - 1], ratio, order).0);
        orders.push(order);
    }
    let value = per_m.iter().copied().sum::<T>() / T::from_usize(per_m.len()).unwrap();
    let spread_lim = spread(&per_m);
    Ok(ATfEstimate {
        value,
        m_values: m_values.to_vec(),
        z_values: z_values.to_vec(),
        ratios,
        per_m,
        orders,
        spread_by_z,
        spread: spread_lim,
    })
}
