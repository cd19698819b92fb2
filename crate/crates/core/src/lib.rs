//! Symbolic construction and numerical simulation of the relativistic
//! Burgers-Schrodinger and nonlinear Schrodinger hierarchies.
//!
//! * [`algebra`]: exact Gaussian-rational polynomials, differential polynomials
//!   and truncated dispersion series in `eps = 1/c^2`.
//! * [`epoly`]: E-polynomials, the boost recursion and point-vortex dynamics.
//! * [`akns`]: recursion operator, hierarchy flows, Lax pairs and zero curvature.
//! * [`burgers`]: log-transform velocity fields, Backlund maps, characteristics.
//! * [`spectral`]: Fourier-multiplier and split-step solvers.

pub mod akns;
pub mod algebra;
pub mod burgers;
pub mod epoly;
pub mod error;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
