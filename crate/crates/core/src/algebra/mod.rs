//! Exact symbolic foundation: Gaussian rationals, sparse multivariate
//! polynomials, differential polynomials and dispersion series.

pub mod diffpoly;
pub mod dispersion;
pub mod integrate;
pub mod poly;
pub mod rational;
pub mod text;

pub use diffpoly::{DiffMonomial, DiffPoly, Field, Jet};
pub use dispersion::{DerivativeSeries, DispersionKind, DispersionSeries, SeriesTarget};
pub use integrate::{formal_integrate, integrate_exact, IntegrationMode};
pub use poly::{Assignment, Monomial, MultiPoly, Var};
pub use rational::GaussianRational;

/// Shorthand for a symbol as a polynomial.
pub fn sym(v: Var) -> MultiPoly {
    MultiPoly::var(v)
}

/// Shorthand for `c * psi^(k)`-style building blocks.
pub fn jet(field: Field, order: u32) -> DiffPoly {
    DiffPoly::jet(field, order)
}
