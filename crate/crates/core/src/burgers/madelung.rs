use serde::Serialize;

use crate::algebra::{DiffMonomial, DiffPoly, DispersionSeries, Field, GaussianRational, MultiPoly, Var};
use crate::error::{Error, Result};

fn hbar() -> MultiPoly {
    MultiPoly::var(Var::Hbar)
}

fn m_pow(e: i32) -> MultiPoly {
    MultiPoly::var_pow(Var::M, e)
}

fn v(k: u32) -> DiffPoly {
    DiffPoly::jet(Field::V, k)
}

fn i_hbar() -> MultiPoly {
    &MultiPoly::i() * &hbar()
}

/// `g -> -i hbar Dg + m V g`: the momentum operator conjugated by `Psi`.
pub fn velocity_operator(g: &DiffPoly) -> DiffPoly {
    let neg_i_hbar = i_hbar().scale(&GaussianRational::from_int(-1));
    &g.total_x_derivative().scale(&neg_i_hbar) + &(&v(0) * g).scale(&m_pow(1))
}

/// `E~(-i hbar D + m V) . 1`.
pub fn conjugated_hamiltonian(dispersion: &DispersionSeries) -> DiffPoly {
    dispersion
        .apply_shifted(&DiffPoly::one(), |g| Ok::<_, Error>(velocity_operator(g)))
        .expect("infallible")
}

/// `i hbar V_t + i (hbar/m) D[E~(-i hbar D + m V) . 1]`, with `V_t` kept as the
/// jet symbol `Vt`. Its vanishing is the velocity form of the Schrodinger
/// equation with the given dispersion.
pub fn general_madelung_residual(dispersion: &DispersionSeries) -> DiffPoly {
    let h = conjugated_hamiltonian(dispersion).total_x_derivative();
    &DiffPoly::jet(Field::Vt, 0).scale(&i_hbar()) + &h.scale(&(&i_hbar() * &m_pow(-1)))
}

/// `i hbar V_t + (hbar^2/2m) V_xx + i hbar V V_x`.
pub fn nbs_form() -> DiffPoly {
    let vt = DiffPoly::jet(Field::Vt, 0).scale(&i_hbar());
    let vxx = v(2).scale(&(&(&hbar() * &hbar()) * &m_pow(-1)).scale(&GaussianRational::from_ratio(1, 2)));
    let adv = (&v(0) * &v(1)).scale(&i_hbar());
    &(&vt + &vxx) + &adv
}

/// The printed first-order correction, moved to the residual side: the
/// coefficient of `eps` in `i hbar V_t - (right-hand side)`, i.e.
/// `(1/8m^3)[hbar^4 V_xxxx + i m hbar^3 (10 V_x V_xx + 4 V V_xxx)
///  - m^2 hbar^2 (12 V V_x^2 + 6 V^2 V_xx) - 4 i m^3 hbar V^3 V_x]`.
pub fn printed_first_correction() -> DiffPoly {
    let h = hbar();
    let i = MultiPoly::i();
    let n = |k: i64| MultiPoly::int(k);
    let t1 = v(4).scale(&h.pow(4));
    let t2 = (&(&v(1) * &v(2)).scale(&n(10)) + &(&v(0) * &v(3)).scale(&n(4)))
        .scale(&(&(&i * &m_pow(1)) * &h.pow(3)));
    let t3 = (&(&v(0) * &v(1).pow(2)).scale(&n(12)) + &(&v(0).pow(2) * &v(2)).scale(&n(6)))
        .scale(&(&m_pow(2) * &h.pow(2)).scale(&GaussianRational::from_int(-1)));
    let t4 = (&v(0).pow(3) * &v(1)).scale(&(&(&i * &m_pow(3)) * &h).scale(&GaussianRational::from_int(-4)));
    (&(&t1 + &t2) + &(&t3 + &t4)).scale(&m_pow(-3).scale(&GaussianRational::from_ratio(1, 8)))
}

/// One monomial on which the derived and printed forms disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermDiff {
    pub monomial: String,
    pub derived: String,
    pub printed: String,
}

/// Term-by-term comparison of two differential polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuredDiff {
    pub derived: String,
    pub printed: String,
    pub mismatches: Vec<TermDiff>,
}

impl StructuredDiff {
    pub fn between(derived: &DiffPoly, printed: &DiffPoly) -> Self {
        let mut monos: Vec<DiffMonomial> =
            derived.terms().chain(printed.terms()).map(|(m, _)| m.clone()).collect();
        monos.sort();
        monos.dedup();
        let mismatches = monos
            .into_iter()
            .filter_map(|m| {
                let a = derived.coeff_of(&m);
                let b = printed.coeff_of(&m);
                (a != b).then(|| TermDiff {
                    monomial: if m.is_one() { "1".into() } else { m.to_string() },
                    derived: a.to_string(),
                    printed: b.to_string(),
                })
            })
            .collect();
        Self { derived: derived.to_string(), printed: printed.to_string(), mismatches }
    }

    pub fn is_empty(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Coefficient of `eps^1` in the semi-relativistic velocity equation,
/// diffed against [`printed_first_correction`].
pub fn first_correction_diff() -> StructuredDiff {
    let residual = general_madelung_residual(&DispersionSeries::semirelativistic(1, 4));
    let derived = residual.split_by(Var::Eps).remove(&1).unwrap_or_default();
    StructuredDiff::between(&derived, &printed_first_correction())
}

/// `hbar -> 0` limit of the velocity equation after dividing by `i hbar`.
pub fn hydrodynamic_limit(dispersion: &DispersionSeries) -> Result<DiffPoly> {
    let residual = general_madelung_residual(dispersion);
    let scaled = residual.scale(&(&MultiPoly::i().scale(&GaussianRational::from_int(-1)) * &MultiPoly::var_pow(Var::Hbar, -1)));
    if scaled.terms().any(|(_, c)| c.min_degree(Var::Hbar).is_some_and(|d| d < 0)) {
        return Err(Error::InvalidParameter("velocity equation is singular as hbar -> 0".into()));
    }
    Ok(scaled.subs(Var::Hbar, &MultiPoly::zero()))
}

/// `V_t + E~'(m V) V_x`.
pub fn hydrodynamic_form(dispersion: &DispersionSeries) -> DiffPoly {
    let speed = dispersion
        .derivative()
        .apply(&DiffPoly::one(), |g| Ok::<_, Error>((&v(0) * g).scale(&m_pow(1))))
        .expect("infallible");
    &DiffPoly::jet(Field::Vt, 0) + &(&speed * &v(1))
}
