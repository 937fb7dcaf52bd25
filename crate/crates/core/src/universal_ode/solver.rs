//! Construction of the critical solution.
//!
//! The origin slope is bracketed by outward shots in `t = sqrt(x)`. Outward
//! integration is only trustworthy while the two bracketing trajectories
//! agree, because the growing mode `x^{4.77}` amplifies any slope error. Past
//! that matching point the solution is taken from the scale family
//! `k^3 psi(k x)` of one decaying solution `psi`, which is integrated inward
//! from the asymptotic regime where that direction is stable.

use super::series::OriginSeries;
use super::table::{State, StateTable};
use super::tail::{fit_sommerfeld, sommerfeld_exponent, window_samples, SommerfeldTail};
use super::{Node, ShootingReport, SolverConfig, UniversalSolution};
use crate::error::{Result, TfError};
use crate::numerics::ode::{Dopri5, Flow};
use crate::numerics::roots::{bisect_predicate, brent};
use crate::scalar::{lit, Real};

const SLOPE_BRACKET: (f64, f64) = (1.0, 2.0);
const MATCH_CAP: f64 = 10.0;
const MATCH_SAMPLES: usize = 4000;
/// Ratio of the inward starting radius to `max_range`.
const INWARD_START_FACTOR: f64 = 1e3;
/// Sommerfeld amplitude used for the inward starting data; any value near the
/// true one works since the scale search absorbs the difference.
const START_AMPLITUDE: f64 = 13.25;
const MAX_BISECTIONS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shot {
    /// u reached zero with negative slope: origin slope too large.
    Steep,
    /// u turned upward while positive: origin slope too small.
    Shallow,
}

/// Right-hand side in `t`: `u_t = 2 t p`, `p_t = 2 u_+^{3/2}`, `p = du/dx`.
fn rhs<T: Real>(t: T, y: &[T; 2]) -> [T; 2] {
    let u = y[0].max(T::zero());
    [lit::<T>(2.0) * t * y[1], lit::<T>(2.0) * u * u.sqrt()]
}

pub(crate) fn working_tolerance<T: Real>(cfg: &SolverConfig<T>) -> T {
    cfg.abs_tolerance.max(T::epsilon() * lit(64.0))
}

struct Shooter<T> {
    x_start: T,
    x_end: T,
    ode: Dopri5<T>,
}

impl<T: Real> Shooter<T> {
    fn new(cfg: &SolverConfig<T>) -> Self {
        let tol = working_tolerance(cfg);
        Self {
            x_start: cfg.series_cutoff,
            x_end: cfg.max_range,
            ode: Dopri5::new(tol, tol * lit(1e-4)),
        }
    }

    /// Integrates outward with origin slope `b` until the trajectory is
    /// classified, recording states when `record` is set.
    fn shoot(&self, b: T, record: Option<&mut Vec<State<T>>>) -> Result<Option<Shot>> {
        let (u0, p0, _) = OriginSeries::new(b).eval(self.x_start);
        let t0 = self.x_start.sqrt();
        let mut shot = None;
        let mut states = record;
        if let Some(k) = states.as_deref_mut() {
            k.push((t0, u0, p0));
        }
        self.ode.integrate(rhs, t0, [u0, p0], self.x_end.sqrt(), |s| {
            if let Some(k) = states.as_deref_mut() {
                k.push((s.t1, s.y1[0], s.y1[1]));
            }
            if s.y1[0] <= T::zero() {
                shot = Some(Shot::Steep);
                Flow::Stop
            } else if s.y1[1] >= T::zero() {
                shot = Some(Shot::Shallow);
                Flow::Stop
            } else {
                Flow::Continue
            }
        })?;
        Ok(shot)
    }

    /// Integrates outward with slope `b` and stops exactly at `x_stop`.
    fn trajectory_to(&self, b: T, x_stop: T) -> Result<Vec<State<T>>> {
        let (u0, p0, _) = OriginSeries::new(b).eval(self.x_start);
        let t0 = self.x_start.sqrt();
        let mut states = vec![(t0, u0, p0)];
        self.ode.integrate(rhs, t0, [u0, p0], x_stop.sqrt(), |s| {
            states.push((s.t1, s.y1[0], s.y1[1]));
            Flow::Continue
        })?;
        Ok(states)
    }
}

pub(crate) fn solve<T: Real>(config: SolverConfig<T>) -> Result<UniversalSolution<T>> {
    config.validate()?;
    let tol = working_tolerance(&config);
    let shooter = Shooter::new(&config);

    let (b_lo, b_hi) = (lit::<T>(SLOPE_BRACKET.0), lit::<T>(SLOPE_BRACKET.1));
    if shooter.shoot(b_lo, None)? != Some(Shot::Shallow) || shooter.shoot(b_hi, None)? != Some(Shot::Steep) {
        return Err(TfError::Bracket(format!(
            "origin slopes {b_lo} and {b_hi} do not straddle the critical solution"
        )));
    }
    let mut iterations = 0usize;
    let (b_lo, b_hi) = bisect_predicate(
        |b| {
            iterations += 1;
            match shooter.shoot(b, None)? {
                Some(s) => Ok(s == Shot::Steep),
                None => Err(TfError::diverged(
                    "origin slope bisection",
                    format!("shot with slope {b} undecided at x = {}", config.max_range),
                )),
            }
        },
        b_lo,
        b_hi,
        config.bisection_tolerance,
        MAX_BISECTIONS,
    )?;
    let slope = (b_lo + b_hi) * lit(0.5);

    let x_match = matching_point(&shooter, b_lo, b_hi, tol, &config)?;
    let mut states = shooter.trajectory_to(slope, x_match)?;
    let (_, u_seam, p_seam) = *states.last().unwrap();

    let inward = InwardFamily::integrate(&config, tol)?;
    let k0 = inward.origin_value.powf(-T::one() / lit(3.0));
    let k = brent(
        |k| Ok(k * k * k * inward.table.value(k * x_match) - u_seam),
        k0 * lit(0.8),
        k0 * lit(1.25),
        T::zero(),
        200,
    )?;
    let k3 = k * k * k;
    let root_k = k.sqrt();
    let derivative_mismatch = k3 * k * inward.table.eval(k * x_match).1 - p_seam;

    // chi(x) = k^3 psi(k x): t scales by sqrt(k), u by k^3, p by k^4.
    let t_match = x_match.sqrt();
    let t_end = config.max_range.sqrt();
    for (t, u, p) in inward.table.states() {
        let t = t / root_k;
        if t > t_match && t < t_end {
            states.push((t, k3 * u, k3 * k * p));
        }
    }
    let (u_end, p_end, _) = inward.table.eval(k * config.max_range);
    states.push((t_end, k3 * u_end, k3 * k * p_end));
    let table = StateTable::new(&states);

    let mut nodes = vec![Node {
        x: T::zero(),
        chi: T::one(),
        chi_prime: -slope,
    }];
    nodes.extend(table.states().map(|(t, u, p)| Node {
        x: t * t,
        chi: u,
        chi_prime: p,
    }));

    let zeta = sommerfeld_exponent::<T>();
    let report = ShootingReport {
        bracket: (b_lo, b_hi),
        iterations,
        match_x: x_match,
        derivative_mismatch,
        inward_origin_slope: -k0 * k0 * k0 * k0 * inward.origin_slope,
        asymptotic_amplitude: lit::<T>(START_AMPLITUDE) * k.powf(-zeta),
    };
    let window = (config.tail_cutoff, config.max_range);
    let placeholder = SommerfeldTail {
        leading_coefficient: lit(144.0),
        correction_amplitude: report.asymptotic_amplitude,
        correction_exponent: zeta,
        fit_window: window,
        higher_order: Vec::new(),
    };
    let mut sol = UniversalSolution {
        origin_slope: slope,
        nodes,
        tail: placeholder,
        config,
        series: OriginSeries::new(slope),
        table,
        report,
    };
    sol.tail = sol.fit_tail(window)?;
    Ok(sol)
}

/// Largest radius, up to a fixed cap, where the two bracketing trajectories
/// still agree within `tol`.
fn matching_point<T: Real>(shooter: &Shooter<T>, b_lo: T, b_hi: T, tol: T, cfg: &SolverConfig<T>) -> Result<T> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    shooter.shoot(b_lo, Some(&mut lo))?;
    shooter.shoot(b_hi, Some(&mut hi))?;
    let lo = StateTable::new(&lo);
    let hi = StateTable::new(&hi);
    let cap = lit::<T>(MATCH_CAP).min(lo.x_max()).min(hi.x_max()).min(cfg.tail_cutoff);
    let start = cfg.series_cutoff;
    let ratio = (cap / start).ln();
    let mut x_match = start;
    for i in 1..=MATCH_SAMPLES {
        let x = start * (ratio * T::from_usize(i).unwrap() / T::from_usize(MATCH_SAMPLES).unwrap()).exp();
        if (lo.value(x) - hi.value(x)).abs() > tol {
            break;
        }
        x_match = x.min(cap);
    }
    if x_match <= start {
        return Err(TfError::diverged(
            "origin slope bisection",
            "bracketing trajectories separate immediately; tighten bisection_tolerance",
        ));
    }
    Ok(x_match)
}

/// One decaying solution `psi`, integrated from deep in the asymptotic region
/// to the origin.
struct InwardFamily<T> {
    table: StateTable<T>,
    origin_value: T,
    origin_slope: T,
}

impl<T: Real> InwardFamily<T> {
    fn integrate(cfg: &SolverConfig<T>, tol: T) -> Result<Self> {
        let x_start = cfg.max_range * lit(INWARD_START_FACTOR);
        let keep_below = cfg.max_range * lit(4.0);
        let (c, d) = SommerfeldTail::asymptotic_start(lit(START_AMPLITUDE), x_start);
        let ode = Dopri5::new(tol, T::min_positive_value());
        let mut states = Vec::new();
        let (_, y0) = ode.integrate(rhs, x_start.sqrt(), [c, d], T::zero(), |s| {
            if s.t1 * s.t1 <= keep_below {
                states.push((s.t1, s.y1[0], s.y1[1]));
            }
            Flow::Continue
        })?;
        if !(y0[0] > T::zero()) {
            return Err(TfError::diverged("inward integration", format!("psi(0) = {}", y0[0])));
        }
        states.reverse();
        Ok(Self {
            table: StateTable::new(&states),
            origin_value: y0[0],
            origin_slope: y0[1],
        })
    }
}

/// Samples the solution on the fit window and fits the tail model.
pub(crate) fn fit_window<T: Real>(sol: &UniversalSolution<T>, window: (T, T)) -> Result<SommerfeldTail<T>> {
    let (lo, hi) = window;
    if !(lo > T::zero() && hi > lo) {
        return Err(TfError::arg(format!("fit window ({lo}, {hi}) is not an interval")));
    }
    if hi > sol.config.max_range {
        return Err(TfError::arg(format!(
            "fit window end {hi} exceeds the integrated range {}",
            sol.config.max_range
        )));
    }
    if hi / lo < lit(2.0) {
        return Err(TfError::IllConditioned(format!("window ({lo}, {hi}) is too narrow")));
    }
    if sol.table.value(lo) >= lit(0.01) {
        return Err(TfError::IllConditioned(format!(
            "window start {lo} is too close to the origin for the asymptotic form"
        )));
    }
    let xs = window_samples(lo, hi);
    let chi: Vec<T> = xs.iter().map(|&x| sol.table.value(x)).collect();
    fit_sommerfeld(&xs, &chi, window)
}
