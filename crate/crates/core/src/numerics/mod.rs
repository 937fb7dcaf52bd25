//! Numerical building blocks: quadrature, an adaptive Runge-Kutta integrator,
//! Hermite interpolation, root finding, small dense least squares, banded
//! Cholesky and Richardson extrapolation. All kernels are generic over
//! [`Real`](crate::Real).

pub mod banded;
pub mod hermite;
pub mod lsq;
pub mod ode;
pub mod quad;
pub mod richardson;
pub mod roots;
