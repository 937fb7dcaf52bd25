use std::io::Write;

use rayon::prelude::*;

use super::frozen::frozen_bounds;
use super::grid::GridPolicy;
use super::{solve_with, DiatomicSpec};
use crate::error::{Result, TfError};
use crate::numerics::lsq::least_squares;
use crate::numerics::richardson::{extrapolate, extrapolate_three};
use crate::scalar::{lit, Real};
use crate::universal_ode::{sci17, sommerfeld_exponent, UniversalSolution};

/// Nominal order of the bilinear discretisation in the energy.
const GRID_ORDER: f64 = 2.0;
/// Box sensitivity above this fraction of the gap rejects the grid.
const BOX_SENSITIVITY_LIMIT: f64 = 1e-2;
/// Half-width of the accepted slope window around -7.
pub const SLOPE_WINDOW: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapEstimate<T = f64> {
    pub spec: DiatomicSpec<T>,
    /// Richardson-extrapolated gap, hartree.
    pub gap: T,
    /// Richardson correction plus box sensitivity, hartree.
    pub error_bar: T,
    pub coarse: T,
    pub fine: T,
    /// Change of the coarse gap when the box is doubled.
    pub box_sensitivity: T,
    pub lower_bound: T,
    pub upper_bound: T,
    pub residual_norm: T,
}

/// `E(Z, R) - 2 E(Z)` from the grids `policy` and `policy.refined()`.
pub fn binding_gap<T: Real>(
    atoms: &UniversalSolution<T>,
    spec: &DiatomicSpec<T>,
    policy: GridPolicy<T>,
    tol: T,
) -> Result<GapEstimate<T>> {
    let frozen = frozen_bounds(atoms, spec.scaled_separation())?;
    let coarse_grid = spec.grid(policy)?;
    let fine_grid = spec.grid(policy.refined())?;
    let big_grid = coarse_grid.extended(lit(2.0))?;
    let coarse = solve_with(atoms, spec, &coarse_grid, tol, frozen)?;
    let fine = solve_with(atoms, spec, &fine_grid, tol, frozen)?;
    let big = solve_with(atoms, spec, &big_grid, tol, frozen)?;
    let (gap, correction) = extrapolate(coarse.gap, fine.gap, lit(2.0), lit(GRID_ORDER));
    let box_sensitivity = (big.gap - coarse.gap).abs();
    if box_sensitivity > lit::<T>(BOX_SENSITIVITY_LIMIT) * gap.abs() {
        return Err(TfError::arg(format!(
            "box too small: doubling it changes the gap by {:e} of {:e} hartree",
            box_sensitivity, gap
        )));
    }
    let error_bar = correction + box_sensitivity;
    if !(error_bar < gap) {
        return Err(TfError::Inconclusive {
            gap: gap.as_f64(),
            error_bar: error_bar.as_f64(),
        });
    }
    Ok(GapEstimate {
        spec: *spec,
        gap,
        error_bar,
        coarse: coarse.gap,
        fine: fine.gap,
        box_sensitivity,
        lower_bound: coarse.frozen.lower,
        upper_bound: coarse.frozen.upper,
        residual_norm: fine.residual_norm,
    })
}

/// `Z,R_bohr,gap_hartree,error_bar`.
pub fn write_gap_table<T: Real, W: Write>(gaps: &[GapEstimate<T>], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["Z", "R_bohr", "gap_hartree", "error_bar"])?;
    for g in gaps {
        w.write_record([
            sci17(g.spec.nuclear_charge),
            sci17(g.spec.separation),
            sci17(g.gap),
            sci17(g.error_bar),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Short-distance law at one nuclear charge.
#[derive(Debug, Clone, PartialEq)]
pub struct DTfPoint<T = f64> {
    pub nuclear_charge: T,
    /// Gaps in the order of the requested separations.
    pub gaps: Vec<GapEstimate<T>>,
    /// Least-squares slope of `ln gap` against `ln R`.
    pub slope: T,
    pub intercept: T,
    /// `gap R^7` extrapolated to `lambda R -> infinity`, hartree bohr^7.
    pub d_tf: T,
    /// Extrapolation correction plus grid-refinement change.
    pub d_tf_error: T,
    /// The same extrapolation from the coarse-grid gaps alone.
    pub d_tf_coarse: T,
    pub observed_order: Option<T>,
}

impl<T: Real> DTfPoint<T> {
    /// Relative change of the estimate between the two grids.
    pub fn refinement_change(&self) -> T {
        ((self.d_tf - self.d_tf_coarse) / self.d_tf).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DTfEstimate<T = f64> {
    /// Per charge, in the order requested.
    pub per_z: Vec<DTfPoint<T>>,
    /// Slope at the largest charge.
    pub slope: T,
    pub d_tf: T,
    pub d_tf_error: T,
}

impl<T: Real> DTfEstimate<T> {
    /// Point at the largest charge.
    pub fn leading(&self) -> &DTfPoint<T> {
        self.per_z
            .iter()
            .max_by(|a, b| a.nuclear_charge.partial_cmp(&b.nuclear_charge).unwrap())
            .expect("at least one charge")
    }

    /// Largest pairwise discrepancy of the estimates in units of their
    /// combined error bars; below 1 the charges agree.
    pub fn universality(&self) -> T {
        let mut worst = T::zero();
        for (i, a) in self.per_z.iter().enumerate() {
            for b in &self.per_z[i + 1..] {
                let combined = (a.d_tf_error * a.d_tf_error + b.d_tf_error * b.d_tf_error).sqrt();
                worst = worst.max((a.d_tf - b.d_tf).abs() / combined);
            }
        }
        worst
    }
}

fn geometric_ratio<T: Real>(r: &[T]) -> Result<T> {
    if r.len() < 3 {
        return Err(TfError::arg("need at least three separations"));
    }
    let ratio = r[1] / r[0];
    let ok = ratio > T::one()
        && r.windows(2)
            .all(|w| ((w[1] / w[0]) - ratio).abs() <= lit::<T>(1e-9) * ratio);
    if !ok {
        return Err(TfError::arg("separations must increase geometrically"));
    }
    Ok(ratio)
}

/// Extrapolates `gap R^7` to `lambda R -> infinity` from the three largest
/// separations.
fn extrapolated<T: Real>(r: &[T], gaps: &[T], ratio: T) -> (T, T, Option<T>) {
    let n = r.len();
    let y = |k: usize| gaps[k] * r[k].powi(7);
    extrapolate_three(y(n - 3), y(n - 2), y(n - 1), ratio, sommerfeld_exponent())
}

/// Fits the short-distance law at each charge over the separations
/// `r_values` (bohr, geometric, increasing).
pub fn d_tf_estimate<T: Real>(
    atoms: &UniversalSolution<T>,
    z_values: &[T],
    r_values: &[T],
    policy: GridPolicy<T>,
    tol: T,
) -> Result<DTfEstimate<T>> {
    if z_values.is_empty() {
        return Err(TfError::arg("need at least one nuclear charge"));
    }
    let ratio = geometric_ratio(r_values)?;
    let jobs: Vec<(usize, usize)> = (0..z_values.len())
        .flat_map(|i| (0..r_values.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<GapEstimate<T>>> = jobs
        .par_iter()
        .map(|&(i, j)| binding_gap(atoms, &DiatomicSpec::new(z_values[i], r_values[j])?, policy, tol))
        .collect();
    let mut results = results.into_iter();
    let mut per_z = Vec::with_capacity(z_values.len());
    for &z in z_values {
        let gaps = (0..r_values.len())
            .map(|_| results.next().expect("one result per job"))
            .collect::<Result<Vec<_>>>()?;
        let ln_r: Vec<T> = r_values.iter().map(|r| r.ln()).collect();
        let ln_g: Vec<T> = gaps.iter().map(|g| g.gap.ln()).collect();
        let (coef, _) = least_squares(&[vec![T::one(); ln_r.len()], ln_r], &ln_g)?;
        let fine: Vec<T> = gaps.iter().map(|g| g.gap).collect();
        let coarse: Vec<T> = gaps.iter().map(|g| g.coarse).collect();
        let (d_tf, correction, order) = extrapolated(r_values, &fine, ratio);
        let (d_tf_coarse, _, _) = extrapolated(r_values, &coarse, ratio);
        per_z.push(DTfPoint {
            nuclear_charge: z,
            gaps,
            slope: coef[1],
            intercept: coef[0],
            d_tf,
            d_tf_error: correction + (d_tf - d_tf_coarse).abs(),
            d_tf_coarse,
            observed_order: order,
        });
    }
    let est = DTfEstimate {
        slope: T::zero(),
        d_tf: T::zero(),
        d_tf_error: T::zero(),
        per_z,
    };
    let lead = est.leading();
    if (lead.slope + lit(7.0)).abs() > lit(SLOPE_WINDOW) {
        return Err(TfError::OutsideRegime(format!(
            "slope {} at Z = {}; increase Z or decrease R",
            lead.slope, lead.nuclear_charge
        )));
    }
    let (slope, d_tf, d_tf_error) = (lead.slope, lead.d_tf, lead.d_tf_error);
    Ok(DTfEstimate {
        slope,
        d_tf,
        d_tf_error,
        ..est
    })
}
