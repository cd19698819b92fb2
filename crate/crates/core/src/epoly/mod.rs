//! E-polynomials `H_n(x,t) = exp(-(i/hbar) Ẽ(-i hbar d/dx) t) x^n`, the boost
//! recursion `K H_n = H_{n+1}`, and the point-vortex dynamics of their zeros.

mod hermite;
pub mod ode;
pub mod roots;
mod vortex;

use std::convert::Infallible;

use num_complex::Complex64;

use crate::algebra::{DispersionSeries, GaussianRational, MultiPoly, Var};

pub use hermite::{hermite_crosscheck, hermite_physicists};
pub use roots::{polynomial_roots, track_roots};
pub use vortex::{
    integrate_vortices, trajectory_velocity_mismatch, vortex_rhs, zero_trajectories, VortexConfig, VortexParams,
    MIN_SEPARATION,
};

/// `H_n^{(E)}(x, t)` for a given dispersion.
#[derive(Clone, Debug, PartialEq)]
pub struct EPolynomial {
    pub n: u32,
    pub dispersion: DispersionSeries,
    pub poly: MultiPoly,
}

/// `P = -i hbar d/dx` acting on polynomials in `x`.
pub fn momentum_op(f: &MultiPoly) -> MultiPoly {
    let c = &MultiPoly::constant(-GaussianRational::i()) * &MultiPoly::var(Var::Hbar);
    &f.derivative(Var::X) * &c
}

/// `Ẽ(P) f`.
pub fn hamiltonian_apply(dispersion: &DispersionSeries, f: &MultiPoly) -> MultiPoly {
    let r: Result<_, Infallible> = dispersion.apply_shifted(f, |g| Ok(momentum_op(g)));
    r.unwrap_or_else(|e| match e {})
}

/// Expands the operator exponential on `x^n`. Each application of `Ẽ(P)` lowers
/// the x-degree by at least two, so the series stops after `n/2` terms.
pub fn epoly_generate(dispersion: &DispersionSeries, n: u32) -> EPolynomial {
    let step = &(&MultiPoly::constant(-GaussianRational::i()) * &MultiPoly::var(Var::T))
        * &MultiPoly::var_pow(Var::Hbar, -1);
    let mut term = MultiPoly::var_pow(Var::X, n as i32);
    let mut acc = term.clone();
    let mut j = 1i64;
    loop {
        // term_j = step * Ẽ(P) term_{j-1} / j
        term = hamiltonian_apply(dispersion, &term);
        if term.is_zero() {
            break;
        }
        term = (&step * &term).scale(&GaussianRational::from_ratio(1, j));
        acc.add_assign_ref(&term);
        j += 1;
    }
    EPolynomial { n, dispersion: dispersion.clone(), poly: acc }
}

/// `i hbar dH/dt - Ẽ(P) H`; identically zero for a correct E-polynomial.
pub fn schrodinger_residual(hp: &EPolynomial) -> MultiPoly {
    let lhs = &(&MultiPoly::i() * &MultiPoly::var(Var::Hbar)) * &hp.poly.derivative(Var::T);
    &lhs - &hamiltonian_apply(&hp.dispersion, &hp.poly)
}

/// Boost `K = x - t Ẽ'(P)` applied to `hp`.
pub fn boost_apply(dispersion: &DispersionSeries, hp: &EPolynomial) -> EPolynomial {
    let r: Result<_, Infallible> = dispersion.derivative().apply(&hp.poly, |g| Ok(momentum_op(g)));
    let d_applied = r.unwrap_or_else(|e| match e {});
    let poly = &(&MultiPoly::var(Var::X) * &hp.poly) - &(&MultiPoly::var(Var::T) * &d_applied);
    EPolynomial { n: hp.n + 1, dispersion: dispersion.clone(), poly }
}

impl EPolynomial {
    /// Value at `t = 0`.
    pub fn initial_value(&self) -> MultiPoly {
        self.poly.subs(Var::T, &MultiPoly::zero())
    }

    pub fn at_eps_zero(&self) -> MultiPoly {
        self.poly.subs(Var::Eps, &MultiPoly::zero())
    }

    pub fn degree_in_x(&self) -> i32 {
        self.poly.max_degree(Var::X).unwrap_or(0)
    }

    /// Ascending coefficients in `x` at numeric `t`, `hbar`, `m`, `eps`.
    pub fn numeric_coeffs(&self, t: f64, params: &VortexParams) -> Vec<Complex64> {
        let vals = params.assignment().with(Var::T, t);
        self.poly.univariate_coeffs(Var::X, &vals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn parse(s: &str) -> MultiPoly {
        MultiPoly::from_str(s).unwrap()
    }

    #[test]
    fn h2_semirelativistic_equals_schrodinger() {
        let h2 = epoly_generate(&DispersionSeries::semirelativistic(2, 6), 2);
        assert_eq!(h2.poly, parse("(1)*x^2 + (1*i)*hbar*m^-1*t"));
    }

    #[test]
    fn h4_semirelativistic() {
        let h4 = epoly_generate(&DispersionSeries::semirelativistic(1, 4), 4);
        let expected = parse(
            "(1)*x^4 + (6*i)*hbar*m^-1*x^2*t + (-3)*hbar^2*m^-2*t^2 + (3*i)*hbar^3*m^-3*eps*t",
        );
        assert_eq!(h4.poly, expected);
    }

    #[test]
    fn h0_is_one() {
        for d in [DispersionSeries::nonrelativistic(), DispersionSeries::semirelativistic(2, 6)] {
            assert_eq!(epoly_generate(&d, 0).poly, MultiPoly::one());
        }
    }

    #[test]
    fn residual_vanishes() {
        for d in [DispersionSeries::nonrelativistic(), DispersionSeries::semirelativistic(1, 4)] {
            for n in 0..7 {
                assert!(schrodinger_residual(&epoly_generate(&d, n)).is_zero());
            }
        }
    }

    #[test]
    fn boost_raises_index() {
        let d = DispersionSeries::semirelativistic(1, 4);
        let h0 = epoly_generate(&d, 0);
        assert_eq!(boost_apply(&d, &h0).poly, MultiPoly::var(Var::X));
        let h3 = epoly_generate(&d, 3);
        assert_eq!(boost_apply(&d, &h3), epoly_generate(&d, 4));
    }

    #[test]
    fn invariants() {
        let d = DispersionSeries::semirelativistic(2, 6);
        let nr = DispersionSeries::nonrelativistic();
        for n in 0..7 {
            let h = epoly_generate(&d, n);
            assert_eq!(h.initial_value(), MultiPoly::var_pow(Var::X, n as i32));
            assert_eq!(h.degree_in_x(), n as i32);
            assert_eq!(h.at_eps_zero(), epoly_generate(&nr, n).poly);
        }
    }
}
