use super::recursion::general_flow;
use crate::algebra::{DiffPoly, DispersionSeries, MultiPoly, Var};
use crate::error::Result;

/// Nonlinear part of the relativistic NLS flow, all eps-orders up to `eps_order`:
/// the upper row of the semi-relativistic general flow minus its `kappa^2 = 0` part.
pub fn relativistic_nonlinearity_through(eps_order: u32) -> Result<DiffPoly> {
    let d = DispersionSeries::semirelativistic(eps_order, 2 * (eps_order + 1));
    let flow = general_flow(&d)?.upper;
    let linear = flow.subs(Var::Kappa2, &MultiPoly::zero());
    Ok(&flow - &linear)
}

/// Coefficient of `eps^order` in the relativistic nonlinearity.
pub fn relativistic_nonlinearity(order: u32) -> Result<DiffPoly> {
    let full = relativistic_nonlinearity_through(order)?;
    Ok(full.split_by(Var::Eps).remove(&(order as i32)).unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn psi(k: u32) -> DiffPoly {
        DiffPoly::jet(Field::Psi, k)
    }
    fn psibar(k: u32) -> DiffPoly {
        DiffPoly::jet(Field::PsiBar, k)
    }

    #[test]
    fn leading_order_is_cubic() {
        let f0 = relativistic_nonlinearity(0).unwrap();
        let c = MultiPoly::var(Var::Kappa2) * MultiPoly::var_pow(Var::M, -1) * MultiPoly::int(-1);
        assert_eq!(f0, (&psi(0).pow(2) * &psibar(0)).scale(&c));
    }

    #[test]
    fn first_correction_bracket() {
        let k = MultiPoly::var(Var::Kappa2);
        let bracket = &(&(&(&(&psi(1) * &psibar(1)) * &psi(0)).scale(&MultiPoly::int(2))
            + &(&(&psi(0) * &psibar(0)) * &psi(2)).scale(&MultiPoly::int(4)))
            + &(&(&psibar(2) * &psi(0).pow(2)) + &(&psibar(0) * &psi(1).pow(2)).scale(&MultiPoly::int(3))));
        let quintic = (&psi(0).pow(3) * &psibar(0).pow(2)).scale(&(&k * &k).scale(&crate::algebra::GaussianRational::from_int(6)));
        let expected = (&bracket.scale(&k.scale(&crate::algebra::GaussianRational::from_int(2))) + &quintic)
            .scale(&(MultiPoly::ratio(-1, 8) * MultiPoly::var_pow(Var::M, -3)));
        assert_eq!(relativistic_nonlinearity(1).unwrap(), expected);
    }

    #[test]
    fn linear_limit_vanishes() {
        for k in 0..2 {
            let f = relativistic_nonlinearity(k).unwrap();
            assert!(f.subs(Var::Kappa2, &MultiPoly::zero()).is_zero());
        }
    }
}
