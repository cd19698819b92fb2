//! NLS hierarchy through the AKNS recursion operator: flows, Lax coefficients,
//! zero-curvature checks and the order-by-order relativistic nonlinearity.

mod lax;
mod nonlinearity;
mod recursion;

use std::fmt;

use serde::Serialize;

use crate::algebra::{DiffPoly, Field, MultiPoly, Var};

pub use lax::{
    lax_coefficients, lax_general, time_derivative, zero_curvature_residual, LaxCoefficients, LaxPair, Matrix2,
    ResidualEntry, ZeroCurvatureReport,
};
pub use nonlinearity::{relativistic_nonlinearity, relativistic_nonlinearity_through};
pub use recursion::{general_flow, hierarchy_flow, recursion_apply, recursion_power, Hierarchy};

/// Normalization `a_N = (-2)^(N-1)` of the top coefficient `A^(N)`.
pub const fn normalization(n: u32) -> i64 {
    (-2i64).pow(n.saturating_sub(1))
}

/// Column `(upper, lower)`: the psi-row and psibar-row of a hierarchy object.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FieldPair {
    pub upper: DiffPoly,
    pub lower: DiffPoly,
}

impl FieldPair {
    pub fn new(upper: DiffPoly, lower: DiffPoly) -> Self {
        Self { upper, lower }
    }

    /// `(psi, psibar)`.
    pub fn seed() -> Self {
        Self::new(DiffPoly::field(Field::Psi), DiffPoly::field(Field::PsiBar))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.upper.is_zero() && self.lower.is_zero()
    }

    /// Lower component equals the formal conjugate of the upper one.
    pub fn is_conjugate_symmetric(&self) -> bool {
        self.upper.conj() == self.lower
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        Self::new(self.upper.scale(c), self.lower.scale(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.upper + &other.upper, &self.lower + &other.lower)
    }

    pub fn map(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Self {
        Self::new(f(&self.upper), f(&self.lower))
    }

    pub fn subs(&self, v: Var, value: &MultiPoly) -> Self {
        self.map(|d| d.subs(v, value))
    }

    pub fn truncate(&self, v: Var, order: i32) -> Self {
        self.map(|d| d.truncate(v, order))
    }

    /// `(psi_t, psibar_t)` for the evolution `i sigma_3 (psi, psibar)_t = self`.
    pub fn velocity(&self) -> Self {
        let i = MultiPoly::i();
        Self::new(self.upper.scale(&-&i), self.lower.scale(&i))
    }
}

impl fmt::Display for FieldPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "upper: {}", self.upper)?;
        write!(f, "lower: {}", self.lower)
    }
}

impl crate::algebra::SeriesTarget for FieldPair {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn scaled(&self, c: &MultiPoly) -> Self {
        self.scale(c)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
}

/// Serializable canonical text of a pair.
#[derive(Clone, Debug, Serialize)]
pub struct FieldPairText {
    pub upper: String,
    pub lower: String,
}

impl From<&FieldPair> for FieldPairText {
    fn from(p: &FieldPair) -> Self {
        Self { upper: p.upper.to_string(), lower: p.lower.to_string() }
    }
}
