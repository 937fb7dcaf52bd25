//! Relaxation of the superposed atoms.
//!
//! With `phi = phi_1 + phi_2 + w` the scaled molecular equation becomes
//! `Delta w = (Phi + w)_+^{3/2} - phi_1^{3/2} - phi_2^{3/2}`, `Phi = phi_1 + phi_2`,
//! whose right side is bounded apart from an integrable `r^{-1/2}` at each
//! nucleus. Its solution maximises the concave functional
//!
//! `J(w) = -(1/8pi) int |grad w|^2 - (1/10pi) int [Phi^{5/2} h(w/Phi) + (5/2) w S]`
//!
//! with `h(e) = (1+e)^{5/2} - 1 - 5e/2` and `S = Phi^{3/2} - phi_1^{3/2} - phi_2^{3/2}`,
//! and the molecular gap is the frozen dual bound plus `max J`. The
//! functional is discretised with bilinear elements on the half plane; the
//! midplane carries the natural symmetry condition and the outer boundary
//! the Robin condition `dw/dn = -4 (r.n) w / r^2` of an `r^{-4}` tail.

use super::frozen::ScaledAtom;
use super::grid::CylGrid;
use super::kernels::{cross15, cross25, h, pow_m1};
use crate::error::{Result, TfError};
use crate::numerics::banded::{BandedCholesky, BandedSpd};
use crate::numerics::quad::GaussLegendre;
use crate::scalar::{lit, Real};

const QUAD_POINTS: usize = 3;
const MAX_NEWTON: usize = 60;
const ARMIJO: f64 = 1e-4;

/// Field values at one quadrature point.
#[derive(Debug, Clone, Copy)]
pub struct QPoint<T> {
    /// Volume weight including `2 pi s`.
    pub weight: T,
    /// Bilinear shape functions of the element corners.
    pub shape: [T; 4],
    pub phi1: T,
    pub phi2: T,
    pub sigma1: T,
    pub sigma2: T,
    pub r1: T,
    pub r2: T,
    /// `Phi^{3/2}`, `Phi^{5/2}` and `S`.
    pub phi: T,
    pub phi32: T,
    pub phi52: T,
    pub cross: T,
}

impl<T: Real> QPoint<T> {
    fn value(&self, corners: &[T; 4]) -> T {
        self.shape[0] * corners[0] + self.shape[1] * corners[1] + self.shape[2] * corners[2] + self.shape[3] * corners[3]
    }
}

/// One accepted update of the nonlinear iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step<T = f64> {
    Newton { damping: T },
    /// Under-relaxed fixed-point step, used when the line search stalls.
    Picard,
}

#[derive(Debug, Clone)]
pub struct Relaxed<T> {
    pub w: Vec<T>,
    /// `max J` over the whole space.
    pub relaxation: T,
    pub residual_norm: T,
    pub history: Vec<Step<T>>,
}

pub struct Discretization<'g, T> {
    pub grid: &'g CylGrid<T>,
    /// Corner node indices of each element in shape-function order.
    pub elements: Vec<[usize; 4]>,
    /// `QUAD_POINTS^2` points per element.
    pub points: Vec<QPoint<T>>,
    /// `(1/4pi)` times stiffness plus Robin form.
    pub quadratic: BandedSpd<T>,
}

fn four_pi<T: Real>() -> T {
    lit::<T>(4.0) * T::PI()
}

impl<'g, T: Real> Discretization<'g, T> {
    pub fn new(grid: &'g CylGrid<T>, atom: ScaledAtom<'_, T>) -> Self {
        let (nz, ns) = (grid.nz(), grid.ns());
        let half = grid.separation * lit(0.5);
        let gl = GaussLegendre::<T>::new(QUAD_POINTS);
        let gl2 = GaussLegendre::<T>::new(2);
        let two_pi = lit::<T>(2.0) * T::PI();
        let mut elements = Vec::with_capacity((nz - 1) * (ns - 1));
        let mut points = Vec::with_capacity((nz - 1) * (ns - 1) * QUAD_POINTS * QUAD_POINTS);
        let mut quadratic = BandedSpd::zeros(grid.len(), ns + 1);
        let inv4pi = T::one() / four_pi();
        for i in 0..nz - 1 {
            let (z0, z1) = (grid.z[i], grid.z[i + 1]);
            let hz = z1 - z0;
            for j in 0..ns - 1 {
                let (s0, s1) = (grid.s[j], grid.s[j + 1]);
                let hs = s1 - s0;
                let nodes = [grid.index(i, j), grid.index(i, j + 1), grid.index(i + 1, j), grid.index(i + 1, j + 1)];
                elements.push(nodes);
                for (z, wz) in gl.mapped(z0, z1) {
                    for (s, ws) in gl.mapped(s0, s1) {
                        let (a, b) = ((z - z0) / hz, (s - s0) / hs);
                        let shape = [(T::one() - a) * (T::one() - b), (T::one() - a) * b, a * (T::one() - b), a * b];
                        let r1 = ((z - half) * (z - half) + s * s).sqrt();
                        let r2 = ((z + half) * (z + half) + s * s).sqrt();
                        let (c1, c2) = (atom.chi(r1), atom.chi(r2));
                        let (phi1, phi2) = (c1 / r1, c2 / r2);
                        let phi = phi1 + phi2;
                        let phi32 = phi * phi.sqrt();
                        points.push(QPoint {
                            weight: wz * ws * two_pi * s,
                            shape,
                            phi1,
                            phi2,
                            sigma1: (T::one() - c1) / r1,
                            sigma2: (T::one() - c2) / r2,
                            r1,
                            r2,
                            phi,
                            phi32,
                            phi52: phi32 * phi,
                            cross: cross15(phi1, phi2),
                        });
                    }
                }
                // Stiffness, exact with 2x2 Gauss for bilinears times s.
                let mut local = [[T::zero(); 4]; 4];
                for (z, wz) in gl2.mapped(z0, z1) {
                    for (s, ws) in gl2.mapped(s0, s1) {
                        let (a, b) = ((z - z0) / hz, (s - s0) / hs);
                        let dz = [-(T::one() - b) / hz, -b / hz, (T::one() - b) / hz, b / hz];
                        let ds = [-(T::one() - a) / hs, (T::one() - a) / hs, -a / hs, a / hs];
                        let wt = wz * ws * two_pi * s * inv4pi;
                        for p in 0..4 {
                            for q in 0..4 {
                                local[p][q] += wt * (dz[p] * dz[q] + ds[p] * ds[q]);
                            }
                        }
                    }
                }
                for p in 0..4 {
                    for q in 0..=p {
                        quadratic.add(nodes[p], nodes[q], local[p][q]);
                    }
                }
            }
        }
        // Robin terms on s = L and z = L: (1/4pi) int beta N_p N_q dS with
        // beta = 4 (r.n) / r^2 = 4 L / r^2 on both faces.
        let l = grid.box_half_width;
        let mut edge = |n0: usize, n1: usize, x0: T, x1: T, along_s: bool| {
            let mut local = [[T::zero(); 2]; 2];
            for (x, wx) in gl.mapped(x0, x1) {
                let t = (x - x0) / (x1 - x0);
                let shape = [T::one() - t, t];
                let (zz, ss) = if along_s { (l, x) } else { (x, l) };
                let beta = lit::<T>(4.0) * l / (zz * zz + ss * ss);
                let ds = two_pi * ss;
                for p in 0..2 {
                    for q in 0..2 {
                        local[p][q] += wx * ds * beta * shape[p] * shape[q] * inv4pi;
                    }
                }
            }
            quadratic.add(n0, n0, local[0][0]);
            quadratic.add(n1, n1, local[1][1]);
            quadratic.add(n0, n1, local[0][1]);
        };
        for i in 0..nz - 1 {
            edge(grid.index(i, ns - 1), grid.index(i + 1, ns - 1), grid.z[i], grid.z[i + 1], false);
        }
        for j in 0..ns - 1 {
            edge(grid.index(nz - 1, j), grid.index(nz - 1, j + 1), grid.s[j], grid.s[j + 1], true);
        }
        Self { grid, elements, points, quadratic }
    }

    fn corners(&self, e: usize, w: &[T]) -> [T; 4] {
        let n = self.elements[e];
        [w[n[0]], w[n[1]], w[n[2]], w[n[3]]]
    }

    fn per_point(&self) -> usize {
        QUAD_POINTS * QUAD_POINTS
    }

    /// Visits every quadrature point with the interpolated `w`.
    pub fn for_each_point<F: FnMut(usize, &QPoint<T>, T)>(&self, w: &[T], mut f: F) {
        let k = self.per_point();
        for e in 0..self.elements.len() {
            let c = self.corners(e, w);
            for p in &self.points[e * k..(e + 1) * k] {
                f(e, p, p.value(&c));
            }
        }
    }

    /// Half-space value of the functional.
    pub fn objective(&self, w: &[T]) -> T {
        let aw = self.quadratic.mul(w);
        let quad: T = aw.iter().zip(w).map(|(a, b)| *a * *b).sum();
        let mut nl = T::zero();
        let c = lit::<T>(2.5);
        self.for_each_point(w, |_, p, wq| {
            nl += p.weight * (p.phi52 * h(wq / p.phi) + c * wq * p.cross);
        });
        -quad * lit(0.5) - nl / (lit::<T>(10.0) * T::PI())
    }

    /// `F(w)_i = -(1/4pi) int [(Phi + w)_+^{3/2} - phi_1^{3/2} - phi_2^{3/2}] N_i`.
    fn source(&self, w: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); w.len()];
        let inv = T::one() / four_pi();
        self.for_each_point(w, |e, p, wq| {
            let f = p.phi32 * pow_m1(wq / p.phi, lit(1.5)) + p.cross;
            let v = p.weight * f * inv;
            for (k, &n) in self.elements[e].iter().enumerate() {
                out[n] -= v * p.shape[k];
            }
        });
        out
    }

    pub fn gradient(&self, w: &[T]) -> Vec<T> {
        let aw = self.quadratic.mul(w);
        let mut g = self.source(w);
        for (gi, ai) in g.iter_mut().zip(aw) {
            *gi -= ai;
        }
        g
    }

    /// Negative Hessian `A' + M(w)`.
    fn curvature(&self, w: &[T]) -> BandedSpd<T> {
        let mut m = self.quadratic.clone();
        let c = lit::<T>(3.0) / (lit::<T>(8.0) * T::PI());
        let k = self.per_point();
        for e in 0..self.elements.len() {
            let corners = self.corners(e, w);
            let mut local = [[T::zero(); 4]; 4];
            for p in &self.points[e * k..(e + 1) * k] {
                let total = p.phi + p.value(&corners);
                if total <= T::zero() {
                    continue;
                }
                let v = p.weight * c * total.sqrt();
                for a in 0..4 {
                    for b in 0..=a {
                        local[a][b] += v * p.shape[a] * p.shape[b];
                    }
                }
            }
            let n = self.elements[e];
            for a in 0..4 {
                for b in 0..=a {
                    m.add(n[a], n[b], local[a][b]);
                }
            }
        }
        m
    }

    /// Maximises the functional by damped Newton from `w = 0`.
    pub fn relax(&self, tol: T) -> Result<Relaxed<T>> {
        let n = self.grid.len();
        let mut w = vec![T::zero(); n];
        let g0 = norm(&self.gradient(&w));
        let mut history = Vec::new();
        if g0 == T::zero() {
            return Ok(Relaxed { w, relaxation: T::zero(), residual_norm: T::zero(), history });
        }
        let mut laplace: Option<BandedCholesky<T>> = None;
        let mut value = self.objective(&w);
        for _ in 0..MAX_NEWTON {
            let g = self.gradient(&w);
            let residual = norm(&g) / g0;
            if residual <= tol {
                return Ok(Relaxed {
                    relaxation: lit::<T>(2.0) * value,
                    w,
                    residual_norm: residual,
                    history,
                });
            }
            let delta = self.curvature(&w).cholesky()?.solve(&g);
            let decrement: T = g.iter().zip(&delta).map(|(a, b)| *a * *b).sum();
            // Below this the objective cannot resolve the step.
            let noise = lit::<T>(1e3) * T::epsilon() * value.abs().max(T::min_positive_value());
            let mut alpha = T::one();
            let mut accepted = false;
            while alpha > lit(1e-8) {
                let trial: Vec<T> = w.iter().zip(&delta).map(|(a, b)| *a + alpha * *b).collect();
                let v = self.objective(&trial);
                if v >= value + lit::<T>(ARMIJO) * alpha * decrement || decrement * alpha < noise {
                    w = trial;
                    value = v;
                    accepted = true;
                    break;
                }
                alpha *= lit(0.5);
            }
            if accepted {
                history.push(Step::Newton { damping: alpha });
                continue;
            }
            // Picard: solve A' w~ = F(w), move halfway.
            if laplace.is_none() {
                laplace = Some(self.quadratic.clone().cholesky()?);
            }
            let target = laplace.as_ref().unwrap().solve(&self.source(&w));
            for (wi, ti) in w.iter_mut().zip(target) {
                *wi = *wi + lit::<T>(0.5) * (ti - *wi);
            }
            let v = self.objective(&w);
            history.push(Step::Picard);
            if !(v >= value - noise) {
                return Err(TfError::diverged(
                    "diatomic Newton iteration",
                    format!("no ascent after line search and Picard fallback; steps {}", describe(&history)),
                ));
            }
            value = v;
        }
        Err(TfError::diverged(
            "diatomic Newton iteration",
            format!(
                "residual {:e} after {MAX_NEWTON} steps; steps {}",
                norm(&self.gradient(&w)) / g0,
                describe(&history)
            ),
        ))
    }
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().map(|x| *x * *x).sum::<T>().sqrt()
}

pub fn describe<T: Real>(history: &[Step<T>]) -> String {
    let parts: Vec<String> = history
        .iter()
        .map(|s| match s {
            Step::Newton { damping } => format!("{}", damping.as_f64()),
            Step::Picard => "picard".to_string(),
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

/// Grid integrals of the relaxed solution over the whole space.
#[derive(Debug, Clone, Copy)]
pub struct Moments<T> {
    pub electrons: T,
    pub kinetic_change: T,
    /// `-int (rho - rho_1 - rho_2)(1/r1 + 1/r2)`.
    pub attraction_change: T,
    /// `(1/2) int (rho - rho_1 - rho_2)(sigma_1 + sigma_2) - (1/2) int rho w`.
    pub repulsion_change: T,
}

impl<'g, T: Real> Discretization<'g, T> {
    pub fn moments(&self, w: &[T]) -> Moments<T> {
        let inv = T::one() / four_pi();
        let half = lit::<T>(0.5);
        let c25 = lit::<T>(2.5);
        let mut m = Moments {
            electrons: T::zero(),
            kinetic_change: T::zero(),
            attraction_change: T::zero(),
            repulsion_change: T::zero(),
        };
        self.for_each_point(w, |_, p, wq| {
            let e = wq / p.phi;
            let total = (p.phi + wq).max(T::zero());
            let rho = total * total.sqrt() * inv;
            let drho = (p.phi32 * pow_m1(e, lit(1.5)) + p.cross) * inv;
            let (a, b) = (p.phi1, p.phi2);
            let dk = p.phi52 * pow_m1(e, c25) + cross25(a, b) + c25 * (a * a.sqrt() * b + b * b.sqrt() * a);
            m.electrons += p.weight * rho;
            m.kinetic_change += p.weight * dk;
            m.attraction_change -= p.weight * drho * (T::one() / p.r1 + T::one() / p.r2);
            m.repulsion_change += p.weight * (half * drho * (p.sigma1 + p.sigma2) - half * rho * wq);
        });
        let two = lit::<T>(2.0);
        Moments {
            electrons: two * m.electrons,
            kinetic_change: two * lit::<T>(3.0) / (lit::<T>(20.0) * T::PI()) * m.kinetic_change,
            attraction_change: two * m.attraction_change,
            repulsion_change: two * m.repulsion_change,
        }
    }
}
