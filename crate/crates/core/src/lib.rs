//! Thomas-Fermi theory of atoms, positive ions and homonuclear diatomic
//! molecules.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common cases.

pub mod atom;
pub mod cli;
pub mod diatomic;
pub mod empirical;
pub mod error;
pub mod numerics;
pub mod scalar;
pub mod units;
pub mod universal_ode;

pub use atom::{radius, AtomSpec, EnergyBreakdown, IonicSolution, RadiusResult};
pub use diatomic::{binding_gap, DiatomicSpec, GapEstimate, GridPolicy};
pub use error::{Result, TfError};
pub use scalar::Real;
pub use universal_ode::{solve_universal, SolverConfig, UniversalSolution};

pub type UniversalSolutionF64 = UniversalSolution<f64>;
pub type UniversalSolutionF32 = UniversalSolution<f32>;
pub type SolverConfigF64 = SolverConfig<f64>;
pub type SolverConfigF32 = SolverConfig<f32>;
pub type IonicSolutionF64 = IonicSolution<f64>;
pub type EnergyBreakdownF64 = EnergyBreakdown<f64>;
pub type GapEstimateF64 = GapEstimate<f64>;
