//! Stretched tensor grid on the half plane `z >= 0`, `s >= 0` in scaled
//! lengths. The nucleus at `z = d/2` is a node; the other lies at `-d/2` by
//! reflection.

use crate::error::{Result, TfError};
use crate::numerics::roots::brent;
use crate::scalar::{lit, Real};

/// Minimum box size relative to `max(R, Z^{-1/3})`.
pub const MIN_BOX_FACTOR: f64 = 10.0;

/// Resolution and extent of a [`CylGrid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPolicy<T = f64> {
    /// Cells in each of the three stretched segments before refinement.
    pub cells: usize,
    /// Each level halves every cell of the base grid.
    pub refinement: u32,
    /// Box half-width over `max(R, Z^{-1/3})`.
    pub box_factor: T,
    /// Lower bound on the box half-width in scaled units, so that the atomic
    /// tails outside hold a negligible charge.
    pub min_box: T,
    /// Smallest cell of the base grid next to a nucleus, over `min(d/2, 1)`.
    pub first_cell: T,
}

impl<T: Real> Default for GridPolicy<T> {
    fn default() -> Self {
        Self {
            cells: 48,
            refinement: 0,
            box_factor: lit(20.0),
            min_box: lit(400.0),
            first_cell: lit(0.02),
        }
    }
}

impl<T: Real> GridPolicy<T> {
    pub fn with_cells(self, cells: usize) -> Self {
        Self { cells, ..self }
    }

    /// Every cell halved; the nodes contain the unrefined ones.
    pub fn refined(self) -> Self {
        Self {
            refinement: self.refinement + 1,
            ..self
        }
    }

    /// Cells per segment after refinement.
    pub fn segment_cells(&self) -> usize {
        self.cells << self.refinement
    }

    pub fn validate(&self) -> Result<()> {
        if self.refinement > 12 {
            return Err(TfError::arg("refinement level above 12"));
        }
        if self.cells < 4 {
            return Err(TfError::arg(format!("grid needs at least 4 cells per segment, got {}", self.cells)));
        }
        if !(self.box_factor >= lit(MIN_BOX_FACTOR)) {
            return Err(TfError::arg(format!(
                "box factor {} below the minimum {MIN_BOX_FACTOR}",
                self.box_factor
            )));
        }
        if !(self.first_cell > T::zero() && self.first_cell < T::one()) || !(self.min_box >= T::zero()) {
            return Err(TfError::arg("grid stretching parameters out of range"));
        }
        Ok(())
    }
}

/// Exponentially stretched segment `x(xi) = a + (b - a) expm1(beta xi) / expm1(beta)`,
/// mirrored when the fine end is `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stretch<T = f64> {
    pub a: T,
    pub b: T,
    pub beta: T,
    pub fine_at_b: bool,
}

impl<T: Real> Stretch<T> {
    fn new(a: T, b: T, cells: usize, first: T, fine_at_b: bool) -> Result<Self> {
        let len = b - a;
        let n = lit::<T>(cells as f64);
        let beta = if len / n <= first {
            T::zero()
        } else {
            let first_cell = |beta: T| len * (beta / n).exp_m1() / beta.exp_m1();
            let mut hi = T::one();
            while first_cell(hi) > first {
                hi *= lit(2.0);
                if hi > lit(700.0) {
                    return Err(TfError::arg("grid stretching too strong for the cell count"));
                }
            }
            brent(|b| Ok(first_cell(b) - first), lit(1e-12), hi, lit(1e-12), 200)?
        };
        Ok(Self { a, b, beta, fine_at_b })
    }

    fn unit(&self, xi: T) -> T {
        if self.beta == T::zero() {
            xi
        } else {
            (self.beta * xi).exp_m1() / self.beta.exp_m1()
        }
    }

    /// Position at `xi`; `xi > 1` continues the stretching past `b` when the
    /// fine end is `a`.
    pub fn at(&self, xi: T) -> T {
        let len = self.b - self.a;
        if self.fine_at_b {
            self.b - len * self.unit(T::one() - xi)
        } else {
            self.a + len * self.unit(xi)
        }
    }

    /// Nodes at `cells` equal steps in the stretched coordinate.
    fn nodes(&self, cells: usize) -> Vec<T> {
        let n = lit::<T>(cells as f64);
        let mut v: Vec<T> = (0..=cells).map(|k| self.at(lit::<T>(k as f64) / n)).collect();
        v[0] = self.a;
        v[cells] = self.b;
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CylGrid<T = f64> {
    /// Scaled separation `lambda R`.
    pub separation: T,
    /// `lambda` of the nuclear charge, scaled length per bohr.
    pub length_scale: T,
    /// Axial nodes, scaled.
    pub z: Vec<T>,
    /// Radial nodes, scaled.
    pub s: Vec<T>,
    /// Segments `[0, d/2]`, `[d/2, L]` in z and `[0, L]` in s.
    pub stretching: [Stretch<T>; 3],
    /// Box half-width `L`, scaled.
    pub box_half_width: T,
    /// Index of the nucleus in `z`.
    pub nucleus: usize,
    pub policy: GridPolicy<T>,
}

impl<T: Real> CylGrid<T> {
    /// Grid for scaled separation `d`; `length_scale` converts to bohr.
    pub fn new(d: T, length_scale: T, policy: GridPolicy<T>) -> Result<Self> {
        policy.validate()?;
        if !(d > T::zero() && d.is_finite()) || !(length_scale > T::zero()) {
            return Err(TfError::arg(format!("separation must be positive, got {d}")));
        }
        let base = policy.cells;
        let n = policy.segment_cells();
        let half = d * lit(0.5);
        // Z^{-1/3} in scaled units is lambda Z^{-1/3}, a constant.
        let tf_length = crate::atom::scale_constant::<T>();
        let box_half = (policy.box_factor * d.max(tf_length)).max(policy.min_box);
        let first = policy.first_cell * half.min(T::one());
        let inner = Stretch::new(T::zero(), half, base, first, true)?;
        let outer = Stretch::new(half, box_half, base, first, false)?;
        let radial = Stretch::new(T::zero(), box_half, base, first, false)?;
        let mut z = inner.nodes(n);
        z.pop();
        z.extend(outer.nodes(n));
        let s = radial.nodes(n);
        let grid = Self {
            separation: d,
            length_scale,
            z,
            s,
            stretching: [inner, outer, radial],
            box_half_width: box_half,
            nucleus: n,
            policy,
        };
        grid.check()?;
        Ok(grid)
    }

    fn check(&self) -> Result<()> {
        let increasing = |v: &[T]| v.windows(2).all(|w| w[1] > w[0]);
        if !increasing(&self.z) || !increasing(&self.s) {
            return Err(TfError::arg("grid nodes are not strictly increasing"));
        }
        if self.z[self.nucleus] != self.separation * lit(0.5) || self.s[0] != T::zero() {
            return Err(TfError::arg("nucleus is not a grid node"));
        }
        let tf_length = crate::atom::scale_constant::<T>();
        if self.box_half_width < lit::<T>(MIN_BOX_FACTOR) * self.separation.max(tf_length) {
            return Err(TfError::arg("box smaller than the minimum"));
        }
        Ok(())
    }

    /// Same interior nodes with the outer segments continued at their
    /// stretching rate out to `factor` times the box.
    pub fn extended(&self, factor: T) -> Result<Self> {
        if !(factor > T::one()) {
            return Err(TfError::arg("box extension factor must exceed 1"));
        }
        let n = lit::<T>(self.policy.segment_cells() as f64);
        let target = self.box_half_width * factor;
        let grow = |stretch: &Stretch<T>, nodes: &mut Vec<T>| {
            let mut k = 1.0;
            loop {
                let x = stretch.at(T::one() + lit::<T>(k) / n);
                if x >= target {
                    let last = *nodes.last().unwrap();
                    let prev = nodes[nodes.len() - 2];
                    if target - last < (last - prev) * lit(0.5) {
                        nodes.pop();
                    }
                    nodes.push(target);
                    break;
                }
                nodes.push(x);
                k += 1.0;
            }
        };
        let mut g = self.clone();
        grow(&self.stretching[1], &mut g.z);
        grow(&self.stretching[2], &mut g.s);
        g.box_half_width = target;
        g.check()?;
        Ok(g)
    }

    pub fn nz(&self) -> usize {
        self.z.len()
    }

    pub fn ns(&self) -> usize {
        self.s.len()
    }

    pub fn len(&self) -> usize {
        self.nz() * self.ns()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat node index, `s` fastest.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ns() + j
    }

    pub fn z_bohr(&self) -> Vec<T> {
        self.z.iter().map(|&z| z / self.length_scale).collect()
    }

    pub fn s_bohr(&self) -> Vec<T> {
        self.s.iter().map(|&s| s / self.length_scale).collect()
    }

    pub fn box_radius_bohr(&self) -> T {
        self.box_half_width / self.length_scale
    }
}
