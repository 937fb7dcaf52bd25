//! Positive ions: the screening function terminated at a finite radius.
//!
//! In the frame where the density edge sits at `x = 1`, the solution with
//! `v(1) = 0` and `v'(1) = -p` is integrated inward, which is the stable
//! direction. Rescaling by `k = v(0)^{-1/3}` restores `chi(0) = 1`, puts the
//! edge at `x_c = 1 / k` and gives the net charge fraction `q = p / v(0)`.
//! The inward slope `p` is adjusted until `q` hits its target.

use super::energy::{radial_integrals, RadialIntegrals};
use super::{length_scale, AtomSpec};
use crate::error::{Result, TfError};
use crate::numerics::ode::{Dopri5, Flow};
use crate::numerics::roots::brent;
use crate::scalar::{lit, Real};
use crate::universal_ode::table::{State, StateTable};
use crate::universal_ode::{solve_universal, Node, SolverConfig, UniversalSolution};

#[derive(Debug, Clone)]
enum Profile<T> {
    Neutral(Box<UniversalSolution<T>>),
    Ion(StateTable<T>),
}

#[derive(Debug, Clone)]
pub struct IonicSolution<T = f64> {
    pub spec: AtomSpec<T>,
    pub origin_slope: T,
    /// Scaled radius of the density edge; infinite for the neutral atom.
    pub cutoff_x: T,
    pub net_charge_fraction: T,
    /// `(Z - N) / r_c` in hartree.
    pub chemical_potential: T,
    pub nodes: Vec<Node<T>>,
    profile: Profile<T>,
}

/// Solves for the ion described by `spec`. For `N = Z` the neutral solution
/// is returned with an infinite cutoff.
pub fn solve_ion<T: Real>(config: &SolverConfig<T>, spec: AtomSpec<T>) -> Result<IonicSolution<T>> {
    let spec = AtomSpec::new(spec.nuclear_charge, spec.electron_number)?;
    let q = spec.charge_fraction();
    if q == T::zero() {
        let sol = solve_universal(*config)?;
        return Ok(IonicSolution::neutral(sol, spec));
    }
    config.validate()?;
    let edge = EdgeShooter::new(config);
    let (_, v0, states) = edge.solve_for(q)?;
    let k = v0.powf(-T::one() / lit(3.0));
    let root_k = k.sqrt();
    let k3 = k * k * k;
    let states: Vec<State<T>> = states
        .into_iter()
        .map(|(t, v, pv)| (t / root_k, k3 * v, k3 * k * pv))
        .collect();
    let table = StateTable::new(&states);
    let origin_slope = -states[0].2;
    let cutoff_x = T::one() / k;
    let z = spec.nuclear_charge;
    let r_c = cutoff_x / length_scale(z);
    let nodes = states
        .iter()
        .map(|&(t, u, pu)| Node {
            x: t * t,
            chi: u,
            chi_prime: pu,
        })
        .collect();
    Ok(IonicSolution {
        spec,
        origin_slope,
        cutoff_x,
        net_charge_fraction: q,
        chemical_potential: (z - spec.electron_number) / r_c,
        nodes,
        profile: Profile::Ion(table),
    })
}

impl<T: Real> IonicSolution<T> {
    /// Wraps a neutral solution.
    pub fn neutral(sol: UniversalSolution<T>, spec: AtomSpec<T>) -> Self {
        Self {
            spec,
            origin_slope: sol.origin_slope,
            cutoff_x: T::infinity(),
            net_charge_fraction: T::zero(),
            chemical_potential: T::zero(),
            nodes: sol.nodes.clone(),
            profile: Profile::Neutral(Box::new(sol)),
        }
    }

    pub fn is_neutral(&self) -> bool {
        matches!(self.profile, Profile::Neutral(_))
    }

    /// Screening function and derivative; zero beyond the cutoff.
    pub fn chi(&self, x: T) -> Result<(T, T)> {
        if !(x >= T::zero()) {
            return Err(TfError::arg(format!("radius must be non-negative, got {x}")));
        }
        Ok(self.eval(x))
    }

    fn eval(&self, x: T) -> (T, T) {
        match &self.profile {
            Profile::Neutral(sol) => {
                let (c, d, _) = sol.eval(x);
                (c, d)
            }
            Profile::Ion(table) => {
                if x == T::zero() {
                    (T::one(), -self.origin_slope)
                } else if x >= self.cutoff_x {
                    (T::zero(), T::zero())
                } else {
                    let (c, d, _) = table.eval(x);
                    (c.max(T::zero()), d)
                }
            }
        }
    }

    pub(crate) fn radial_integrals(&self) -> Result<RadialIntegrals<T>> {
        let z = self.spec.nuclear_charge;
        match &self.profile {
            Profile::Neutral(sol) => {
                let extent = lit::<T>(1e6).max(sol.config.max_range);
                radial_integrals(z, |x| sol.eval(x).0, extent, false)
            }
            Profile::Ion(_) => radial_integrals(z, |x| self.eval(x).0, self.cutoff_x, true),
        }
    }

    /// Number of electrons from quadrature of the density.
    pub fn electron_count(&self) -> Result<T> {
        Ok(self.radial_integrals()?.electrons)
    }

    /// Density edge in bohr.
    pub fn cutoff_radius(&self) -> T {
        self.cutoff_x / length_scale(self.spec.nuclear_charge)
    }
}

/// Inward shots from a unit edge radius.
pub(crate) struct EdgeShooter<T> {
    tol: T,
}

/// Outcome of one inward shot: `v(0)`, or `None` when the solution blows up
/// before reaching the origin.
type Shot<T> = Option<(T, Vec<State<T>>)>;

impl<T: Real> EdgeShooter<T> {
    pub fn new(config: &SolverConfig<T>) -> Self {
        Self {
            tol: config.abs_tolerance.max(T::epsilon() * lit(64.0)),
        }
    }

    fn shoot(&self, p: T, record: bool) -> Result<Shot<T>> {
        let ode = Dopri5::new(self.tol, self.tol * p.min(T::one()) * lit(1e-3));
        let blowup = lit::<T>(1e12) * p.max(T::one());
        let mut states = Vec::new();
        if record {
            states.push((T::one(), T::zero(), -p));
        }
        let mut exploded = false;
        let rhs = |t: T, y: &[T; 2]| {
            let u = y[0].max(T::zero());
            [lit::<T>(2.0) * t * y[1], lit::<T>(2.0) * u * u.sqrt()]
        };
        let (_, y0) = ode.integrate(rhs, T::one(), [T::zero(), -p], T::zero(), |s| {
            if !(s.y1[0] < blowup) {
                exploded = true;
                return Flow::Stop;
            }
            if record {
                states.push((s.t1, s.y1[0], s.y1[1]));
            }
            Flow::Continue
        })?;
        if exploded {
            return Ok(None);
        }
        states.reverse();
        Ok(Some((y0[0], states)))
    }

    /// Net charge fraction produced by inward slope `p` (zero on blow-up).
    fn charge_fraction(&self, p: T) -> Result<T> {
        Ok(match self.shoot(p, false)? {
            Some((v0, _)) => p / v0,
            None => T::zero(),
        })
    }

    /// Returns the inward slope, `v(0)` and the recorded states for `q`.
    pub fn solve_for(&self, q: T) -> Result<(T, T, Vec<State<T>>)> {
        if !(q > T::zero() && q < T::one()) {
            return Err(TfError::arg(format!("net charge fraction {q} must lie in (0, 1)")));
        }
        let f = |l: T| -> Result<T> {
            let qq = self.charge_fraction(l.exp())?;
            Ok(if qq > T::zero() { qq.ln() - q.ln() } else { -T::infinity() })
        };
        // f decreases from 0 (p -> 0) to -inf (blow-up); bracket the root.
        let mut lo = T::zero();
        while f(lo)? <= T::zero() {
            lo -= lit(4.0);
            if lo < lit(-200.0) {
                return Err(TfError::Bracket(format!("no inward slope yields q = {q}")));
            }
        }
        let mut hi = lo + lit(4.0);
        while f(hi)? > T::zero() {
            hi += lit(4.0);
            if hi > lit(50.0) {
                return Err(TfError::Bracket(format!("no inward slope yields q = {q}")));
            }
        }
        let l = brent(
            |l| {
                let v = f(l)?;
                // Brent needs finite values; blow-up is far below any target.
                Ok(if v.is_finite() { v } else { lit(-1e3) })
            },
            lo,
            hi,
            T::zero(),
            300,
        )?;
        let p = l.exp();
        match self.shoot(p, true)? {
            Some((v0, states)) => Ok((p, v0, states)),
            None => Err(TfError::diverged("ion shooting", format!("inward solution blew up at q = {q}"))),
        }
    }

    /// Edge radius `x_c` for net charge fraction `q`.
    pub fn cutoff(&self, q: T) -> Result<T> {
        let (_, v0, _) = self.solve_for(q)?;
        Ok(v0.cbrt())
    }
}
