//! Neutral homonuclear diatomic molecules.
//!
//! The molecule is solved in the universal units of its atoms: lengths
//! `x = lambda r`, potentials over `Z lambda`, energies over `Z^2 lambda`,
//! so the scaled separation `d = lambda R` is the only parameter. The gap
//! `E(Z, R) - 2 E(Z)` is assembled from a frozen-atom part computed by
//! quadrature and the relaxation of the superposed atoms computed on a
//! [`CylGrid`]; no large total energies are subtracted.
//!
//! Use a universal solution tabulated well past the separation, e.g.
//! `max_range = 1e5`, when `lambda R` reaches the hundreds.

mod frozen;
mod gap;
mod grid;
mod kernels;
mod pde;


use std::io::Write;
use std::path::Path;

pub use frozen::FrozenBounds;
pub use gap::{binding_gap, d_tf_estimate, write_gap_table, DTfEstimate, DTfPoint, GapEstimate};
pub use grid::{CylGrid, GridPolicy, Stretch, MIN_BOX_FACTOR};
pub use pde::Step;

use crate::atom::{energy_neutral, length_scale, EnergyBreakdown};
use crate::error::{Result, TfError};
use crate::scalar::{lit, Real};
use crate::universal_ode::{sci17, UniversalSolution};
use frozen::{frozen_bounds, ScaledAtom};
use pde::Discretization;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiatomicSpec<T = f64> {
    pub nuclear_charge: T,
    /// Internuclear distance in bohr.
    pub separation: T,
}

impl<T: Real> DiatomicSpec<T> {
    pub fn new(nuclear_charge: T, separation: T) -> Result<Self> {
        if !(nuclear_charge > T::zero() && nuclear_charge.is_finite()) {
            return Err(TfError::arg(format!("nuclear charge must be positive, got {nuclear_charge}")));
        }
        if !(separation > T::zero() && separation.is_finite()) {
            return Err(TfError::arg(format!("separation must be positive, got {separation}")));
        }
        Ok(Self { nuclear_charge, separation })
    }

    pub fn total_electrons(&self) -> T {
        lit::<T>(2.0) * self.nuclear_charge
    }

    pub fn length_scale(&self) -> T {
        length_scale(self.nuclear_charge)
    }

    /// `lambda R`.
    pub fn scaled_separation(&self) -> T {
        self.length_scale() * self.separation
    }

    /// Hartree per scaled energy unit, `Z^2 lambda`.
    pub fn energy_unit(&self) -> T {
        self.nuclear_charge * self.nuclear_charge * self.length_scale()
    }

    pub fn grid(&self, policy: GridPolicy<T>) -> Result<CylGrid<T>> {
        CylGrid::new(self.scaled_separation(), self.length_scale(), policy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiatomicEnergy<T = f64> {
    /// Electronic energy of the molecule from the relaxed density.
    pub electronic: EnergyBreakdown<T>,
    /// `U = Z^2 / R`.
    pub nuclear_repulsion: T,
    pub total: T,
}

#[derive(Debug, Clone)]
pub struct DiatomicSolution<T = f64> {
    pub spec: DiatomicSpec<T>,
    pub grid: CylGrid<T>,
    /// `psi` in hartree at the grid nodes (index `i * ns + j`), where the
    /// potential is `Z/|r - R1| + Z/|r - R2| + psi`.
    pub smooth_potential: Vec<T>,
    /// Final gradient norm relative to the initial one.
    pub residual_norm: T,
    pub steps: Vec<Step<T>>,
    /// Frozen-atom bounds, hartree.
    pub frozen: FrozenBounds<T>,
    /// Energy released by relaxing the superposed atoms, hartree.
    pub relaxation: T,
    /// `E(Z, R) - 2 E(Z)` on this grid, hartree.
    pub gap: T,
    pub electron_count: T,
    /// Smallest total potential over the nodes other than the nucleus, hartree.
    pub min_potential: T,
    pub energy: DiatomicEnergy<T>,
    /// Neutral atom at the same charge.
    pub atom_energy: EnergyBreakdown<T>,
}

impl<T: Real> DiatomicSolution<T> {
    /// Gap from the primal energy of the relaxed density; agrees with
    /// [`gap`](Self::gap) up to discretisation error.
    pub fn primal_gap(&self) -> T {
        self.energy.total - lit::<T>(2.0) * self.atom_energy.total
    }

    /// Nodes with `psi`: `z_bohr,s_bohr,psi_hartree`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["z_bohr", "s_bohr", "psi_hartree"])?;
        let (z, s) = (self.grid.z_bohr(), self.grid.s_bohr());
        for (i, zi) in z.iter().enumerate() {
            for (j, sj) in s.iter().enumerate() {
                let psi = self.smooth_potential[self.grid.index(i, j)];
                w.write_record([sci17(*zi), sci17(*sj), sci17(psi)])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn dump_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Solves the molecule on `grid` to relative residual `tol`.
pub fn solve_diatomic<T: Real>(
    atoms: &UniversalSolution<T>,
    spec: &DiatomicSpec<T>,
    grid: &CylGrid<T>,
    tol: T,
) -> Result<DiatomicSolution<T>> {
    let frozen = frozen_bounds(atoms, spec.scaled_separation())?;
    solve_with(atoms, spec, grid, tol, frozen)
}

pub(crate) fn solve_with<T: Real>(
    atoms: &UniversalSolution<T>,
    spec: &DiatomicSpec<T>,
    grid: &CylGrid<T>,
    tol: T,
    frozen: FrozenBounds<T>,
) -> Result<DiatomicSolution<T>> {
    let d = spec.scaled_separation();
    if (grid.separation - d).abs() > lit::<T>(1e-12) * d {
        return Err(TfError::arg("grid was built for a different separation"));
    }
    if !(tol > T::zero()) {
        return Err(TfError::arg(format!("tolerance must be positive, got {tol}")));
    }
    let atom = ScaledAtom::new(atoms);
    let disc = Discretization::new(grid, atom);
    let relaxed = disc.relax(tol)?;
    let moments = disc.moments(&relaxed.w);

    let unit = spec.energy_unit();
    let potential_unit = spec.nuclear_charge * spec.length_scale();
    let half = d * lit(0.5);
    let mut smooth = Vec::with_capacity(grid.len());
    let mut min_potential = T::infinity();
    for (i, &z) in grid.z.iter().enumerate() {
        for (j, &s) in grid.s.iter().enumerate() {
            let k = grid.index(i, j);
            let r1 = ((z - half) * (z - half) + s * s).sqrt();
            let r2 = ((z + half) * (z + half) + s * s).sqrt();
            let w = relaxed.w[k];
            smooth.push(potential_unit * (w - atom.sigma(r1) - atom.sigma(r2)));
            if r1 > T::zero() {
                min_potential = min_potential.min(potential_unit * (atom.phi(r1) + atom.phi(r2) + w));
            }
        }
    }

    let z = spec.nuclear_charge;
    let atom_energy = energy_neutral(atoms, z)?;
    let chi_d = atom.chi(d);
    let two = lit::<T>(2.0);
    // Cross terms of the two atoms that the grid does not see.
    let attraction_cross = -two * (T::one() - chi_d) / d;
    let repulsion_cross = T::one() / d - two * chi_d / d + frozen.electrostatic;
    let electronic = EnergyBreakdown::new(
        two * atom_energy.kinetic + unit * moments.kinetic_change,
        two * atom_energy.nuclear_attraction + unit * (moments.attraction_change + attraction_cross),
        two * atom_energy.hartree_repulsion + unit * (moments.repulsion_change + repulsion_cross),
    );
    let nuclear_repulsion = z * z / spec.separation;
    let scale = |b: FrozenBounds<T>| FrozenBounds {
        electrostatic: b.electrostatic * unit,
        lower: b.lower * unit,
        upper: b.upper * unit,
    };
    Ok(DiatomicSolution {
        spec: *spec,
        grid: grid.clone(),
        smooth_potential: smooth,
        residual_norm: relaxed.residual_norm,
        steps: relaxed.history,
        frozen: scale(frozen),
        relaxation: relaxed.relaxation * unit,
        gap: (frozen.lower + relaxed.relaxation) * unit,
        electron_count: moments.electrons * z,
        min_potential,
        energy: DiatomicEnergy {
            electronic,
            nuclear_repulsion,
            total: electronic.total + nuclear_repulsion,
        },
        atom_energy,
    })
}
