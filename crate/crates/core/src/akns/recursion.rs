use std::sync::{OnceLock, RwLock};

use super::FieldPair;
use crate::algebra::{integrate_exact, DiffPoly, DispersionSeries, Field, GaussianRational, MultiPoly, Var};
use crate::error::{Error, Result};

/// `R (a, b) = i sigma_3 [[D + 2k psi I psibar, -2k psi I psi], [-2k psibar I psibar, D + 2k psibar I psi]] (a, b)`
/// with `k = kappa^2`. Both integrals combine into the single exact antiderivative
/// `I(psibar a - psi b)`.
pub fn recursion_apply(v: &FieldPair) -> Result<FieldPair> {
    let psi = DiffPoly::field(Field::Psi);
    let psibar = DiffPoly::field(Field::PsiBar);
    let two_k = MultiPoly::var(Var::Kappa2).scale(&GaussianRational::from_int(2));
    let density = &(&psibar * &v.upper) - &(&psi * &v.lower);
    let integral = integrate_exact(&density)?.scale(&two_k);
    let i = MultiPoly::i();
    let upper = (&v.upper.total_x_derivative() + &(&psi * &integral)).scale(&i);
    let lower = (&v.lower.total_x_derivative() - &(&psibar * &integral)).scale(&-&i);
    let out = FieldPair::new(upper, lower);
    if v.is_conjugate_symmetric() && !out.is_conjugate_symmetric() {
        return Err(Error::InvalidParameter("recursion broke conjugation symmetry".into()));
    }
    Ok(out)
}

/// Cache of `R^k (psi, psibar)`; populated by one writer, read concurrently.
#[derive(Debug, Default)]
pub struct Hierarchy {
    powers: RwLock<Vec<FieldPair>>,
}

impl Hierarchy {
    pub fn new() -> Self {
        Self { powers: RwLock::new(vec![FieldPair::seed()]) }
    }

    /// `R^k (psi, psibar)`.
    pub fn power(&self, k: u32) -> Result<FieldPair> {
        if let Some(p) = self.powers.read().expect("cache poisoned").get(k as usize) {
            return Ok(p.clone());
        }
        let mut w = self.powers.write().expect("cache poisoned");
        if w.is_empty() {
            w.push(FieldPair::seed());
        }
        while w.len() <= k as usize {
            let next = recursion_apply(w.last().unwrap())?;
            w.push(next);
        }
        Ok(w[k as usize].clone())
    }
}

fn shared() -> &'static Hierarchy {
    static CACHE: OnceLock<Hierarchy> = OnceLock::new();
    CACHE.get_or_init(Hierarchy::new)
}

/// `R^k (psi, psibar)` from the process-wide cache.
pub fn recursion_power(k: u32) -> Result<FieldPair> {
    shared().power(k)
}

/// Right-hand side of `i sigma_3 (psi, psibar)_{t_N} = R^N (psi, psibar)`.
pub fn hierarchy_flow(n: u32) -> Result<FieldPair> {
    if n == 0 {
        return Err(Error::InvalidParameter("flow index must be at least 1".into()));
    }
    recursion_power(n)
}

/// `(E0 + sum_N E_N R^N)(psi, psibar)`, truncated at the dispersion's eps-order.
pub fn general_flow(dispersion: &DispersionSeries) -> Result<FieldPair> {
    let mut acc = FieldPair::seed().scale(dispersion.rest_energy());
    for (n, c) in dispersion.coeffs() {
        acc = acc.add(&recursion_power(n)?.scale(c));
    }
    Ok(match dispersion.eps_order() {
        Some(k) => acc.truncate(Var::Eps, k as i32),
        None => acc,
    })
}
