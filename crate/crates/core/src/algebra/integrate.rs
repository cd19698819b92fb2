//! Formal x-integration of differential polynomials.
//!
//! The strict mode peels off the top-ranked jet `u^(K)` at each step: an exact
//! `f = D g` is linear in `u^(K)` with coefficient `a = dg/du^(K-1)`, so
//! `G = int a du^(K-1)` removes every `u^(K)` term from `f - D G`. For exact
//! input the top jet strictly decreases; anything else is not a total derivative.

use super::diffpoly::{DiffMonomial, DiffPoly, Jet};
use super::poly::Var;
use super::rational::GaussianRational;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegrationMode {
    /// Fail with `NotExactDerivative` when no local antiderivative exists.
    Strict,
    /// Wrap the non-exact residue in an `Int(...)` marker.
    Symbolic,
}

/// Antiderivative with zero integration constant.
pub fn formal_integrate(f: &DiffPoly, mode: IntegrationMode) -> Result<DiffPoly> {
    if !f.is_local() {
        return match mode {
            IntegrationMode::Strict => Err(Error::NotExactDerivative(f.to_string())),
            IntegrationMode::Symbolic => Err(Error::NestedNonlocal),
        };
    }
    match peel(f) {
        Ok(g) => Ok(g),
        Err((g, residue)) => match mode {
            IntegrationMode::Strict => Err(Error::NotExactDerivative(f.to_string())),
            IntegrationMode::Symbolic => Ok(&g + &DiffPoly::nonlocal(residue)),
        },
    }
}

/// Strict integration shorthand.
pub fn integrate_exact(f: &DiffPoly) -> Result<DiffPoly> {
    formal_integrate(f, IntegrationMode::Strict)
}

/// Returns `g` with `D g = f`, or the partial antiderivative and the remaining residue.
fn peel(f: &DiffPoly) -> std::result::Result<DiffPoly, (DiffPoly, DiffPoly)> {
    let mut g = DiffPoly::zero();
    let mut rem = f.clone();
    let mut previous_top: Option<Jet> = None;
    loop {
        if rem.is_zero() {
            return Ok(g);
        }
        let top = rem.jets().into_iter().max_by_key(|j| j.rank());
        let Some(top) = top else {
            // Jet-free remainder: integrate explicit x-dependence.
            let mut out = DiffPoly::zero();
            let mut stuck = false;
            for (m, c) in rem.terms() {
                match c.antiderivative(Var::X) {
                    Some(ci) => out.add_term(m.clone(), &ci),
                    None => stuck = true,
                }
            }
            return if stuck { Err((g, rem)) } else { Ok(&g + &out) };
        };
        if top.order == 0 || previous_top.is_some_and(|p| p.rank() <= top.rank()) {
            return Err((g, rem));
        }
        let lower = Jet::new(top.field, top.order - 1);
        let mut big_g = DiffPoly::zero();
        let mut stuck = false;
        for (m, c) in rem.terms() {
            let e = m.exp(&top);
            if e == 0 {
                continue;
            }
            // The coefficient of u^(K) must be free of every order-K jet.
            if e > 1 || m.jets.keys().any(|j| j.order >= top.order && *j != top) {
                stuck = true;
                break;
            }
            let a = m.with_jet_delta(top, -1);
            let el = a.exp(&lower) as i64;
            let lifted: DiffMonomial = a.with_jet_delta(lower, 1);
            big_g.add_term(lifted, &c.scale(&GaussianRational::from_ratio(1, el + 1)));
        }
        if stuck {
            return Err((g, rem));
        }
        rem.sub_assign_ref(&big_g.total_x_derivative());
        g.add_assign_ref(&big_g);
        previous_top = Some(top);
    }
}
