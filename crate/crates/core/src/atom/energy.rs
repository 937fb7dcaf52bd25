//! Thomas-Fermi energy functional evaluated on a radial density.

use super::{check_charge, density_from_potential, length_scale, IonicSolution};
use crate::error::{Result, TfError};
use crate::numerics::quad::GaussLegendre;
use crate::scalar::{lit, Real};
use crate::universal_ode::UniversalSolution;

/// Energy terms in hartree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown<T = f64> {
    pub kinetic: T,
    pub nuclear_attraction: T,
    pub hartree_repulsion: T,
    pub total: T,
}

impl<T: Real> EnergyBreakdown<T> {
    pub fn new(kinetic: T, nuclear_attraction: T, hartree_repulsion: T) -> Self {
        Self {
            kinetic,
            nuclear_attraction,
            hartree_repulsion,
            total: kinetic + nuclear_attraction + hartree_repulsion,
        }
    }

    /// `2K + V_ne + V_ee`, zero for a Thomas-Fermi minimizer.
    pub fn virial_defect(&self) -> T {
        self.kinetic + self.kinetic + self.nuclear_attraction + self.hartree_repulsion
    }
}

/// Scaled radius up to which the neutral density is integrated; the
/// neglected charge is `~ 576 / x^3`.
const NEUTRAL_EXTENT: f64 = 1e6;
const GL_ORDER: usize = 16;
const REL_TARGET: f64 = 1e-11;
const MAX_PANELS: usize = 4096;

#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialIntegrals<T> {
    pub energy: EnergyBreakdown<T>,
    pub electrons: T,
}

/// Integrates the functional for the spherically symmetric density generated
/// by the screening profile `u` (scaled radius to value) on `[0, x_end]`.
/// With `graded_end` the panels are refined geometrically toward `x_end`,
/// where an ionic density vanishes like a power.
pub(crate) fn radial_integrals<T: Real, U: Fn(T) -> T>(
    z: T,
    u: U,
    x_end: T,
    graded_end: bool,
) -> Result<RadialIntegrals<T>> {
    check_charge(z)?;
    let lambda = length_scale(z);
    let rule = GaussLegendre::<T>::new(GL_ORDER);
    let mut panels = 32;
    let mut prev: Option<RadialIntegrals<T>> = None;
    while panels <= MAX_PANELS {
        let breaks = breakpoints(x_end.sqrt(), panels, graded_end);
        let s_breaks: Vec<T> = breaks.iter().map(|&t| t / lambda.sqrt()).collect();
        let cur = integrate_shells(z, lambda, &u, &s_breaks, &rule);
        if let Some(p) = prev {
            let close = |a: T, b: T| (a - b).abs() <= lit::<T>(REL_TARGET) * b.abs();
            if close(p.energy.kinetic, cur.energy.kinetic)
                && close(p.energy.nuclear_attraction, cur.energy.nuclear_attraction)
                && close(p.energy.hartree_repulsion, cur.energy.hartree_repulsion)
            {
                return Ok(cur);
            }
        }
        prev = Some(cur);
        panels *= 2;
    }
    Err(TfError::diverged("energy quadrature", format!("no convergence with {MAX_PANELS} panels")))
}

/// Panel edges in `t = sqrt(x)`.
fn breakpoints<T: Real>(t_end: T, panels: usize, graded_end: bool) -> Vec<T> {
    let t_first = t_end.min(lit(0.8)) * lit(0.0625);
    let mut b = vec![T::zero()];
    let (geometric, grading) = if graded_end { (panels - panels / 4, panels / 4) } else { (panels, 0) };
    let ratio = (t_end / t_first).ln() / T::from_usize(geometric).unwrap();
    for i in 0..geometric {
        b.push(t_first * (ratio * T::from_usize(i).unwrap()).exp());
    }
    if grading > 0 {
        // Halve the distance to the edge for the last quarter of the panels.
        let start = *b.last().unwrap();
        let gap = t_end - start;
        for k in 1..grading {
            b.push(t_end - gap * lit::<T>(0.5).powi(k as i32));
        }
    }
    b.push(t_end);
    b
}

fn integrate_shells<T: Real, U: Fn(T) -> T>(
    z: T,
    lambda: T,
    u: &U,
    s_breaks: &[T],
    rule: &GaussLegendre<T>,
) -> RadialIntegrals<T> {
    let eight_pi = lit::<T>(8.0) * T::PI();
    let c_k = lit::<T>(0.3) * (lit::<T>(3.0) * T::PI() * T::PI()).powf(lit(2.0 / 3.0));
    // With r = s^2 the volume element is 8 pi s^5 ds.
    let rho = |s: T| {
        let r = s * s;
        density_from_potential(z * u(lambda * r) / r)
    };
    let mut electrons = T::zero();
    let mut inv_r = T::zero();
    let mut kinetic = T::zero();
    // (dN, N_inside / r, W_inside) per node, W = integral of rho / r.
    let mut shells = Vec::with_capacity(s_breaks.len() * rule.nodes.len());
    for w in s_breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut panel_n = T::zero();
        let mut panel_w = T::zero();
        for (s, wt) in rule.mapped(a, b) {
            let d = rho(s);
            let r = s * s;
            let dv = eight_pi * s.powi(5) * wt;
            kinetic += c_k * d.powf(lit(5.0 / 3.0)) * dv;
            panel_n += d * dv;
            panel_w += d * dv / r;
            let mut n_in = T::zero();
            let mut w_in = T::zero();
            for (s2, wt2) in rule.mapped(a, s) {
                let d2 = rho(s2);
                let dv2 = eight_pi * s2.powi(5) * wt2;
                n_in += d2 * dv2;
                w_in += d2 * dv2 / (s2 * s2);
            }
            shells.push((d * dv, (electrons + n_in) / r, inv_r + w_in));
        }
        electrons += panel_n;
        inv_r += panel_w;
    }
    // Each shell feels the charge inside it and the potential of the charge
    // outside it; the half avoids double counting.
    let hartree = shells
        .iter()
        .map(|&(dn, inner, w_in)| dn * (inner + inv_r - w_in))
        .sum::<T>()
        * lit(0.5);
    RadialIntegrals {
        energy: EnergyBreakdown::new(kinetic, -z * inv_r, hartree),
        electrons,
    }
}

/// Energy of the neutral atom from direct quadrature of the functional.
pub fn energy_neutral<T: Real>(sol: &UniversalSolution<T>, z: T) -> Result<EnergyBreakdown<T>> {
    let extent = lit::<T>(NEUTRAL_EXTENT).max(sol.config.max_range);
    Ok(radial_integrals(z, |x| sol.eval(x).0, extent, false)?.energy)
}

/// `-(3/7) B Z^2 lambda`: the neutral energy from the origin slope alone.
pub fn energy_neutral_from_slope<T: Real>(sol: &UniversalSolution<T>, z: T) -> Result<T> {
    check_charge(z)?;
    Ok(-lit::<T>(3.0 / 7.0) * sol.origin_slope * z * z * length_scale(z))
}

/// Energy of an ion from direct quadrature over the support of its density.
pub fn energy_ion<T: Real>(ion: &IonicSolution<T>) -> Result<EnergyBreakdown<T>> {
    Ok(ion.radial_integrals()?.energy)
}

/// `-(3/7) (Z^2 lambda B - Z q mu)`, which follows from the virial relation
/// and the potential at the nucleus.
pub fn energy_ion_from_slope<T: Real>(ion: &IonicSolution<T>) -> T {
    let z = ion.spec.nuclear_charge;
    -lit::<T>(3.0 / 7.0)
        * (z * z * length_scale(z) * ion.origin_slope - z * ion.net_charge_fraction * ion.chemical_potential)
}
