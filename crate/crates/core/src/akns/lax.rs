use serde::Serialize;

use super::recursion::recursion_power;
use super::FieldPair;
use crate::algebra::{integrate_exact, DiffPoly, DispersionSeries, Field, GaussianRational, MultiPoly, Var};
use crate::error::Result;

pub type Matrix2 = [[DiffPoly; 2]; 2];

/// Time-part coefficients `C` (with its conjugate row) and `A`, polynomial in `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaxCoefficients {
    pub c: FieldPair,
    pub a: DiffPoly,
}

fn p_pow(k: u32) -> MultiPoly {
    MultiPoly::var_pow(Var::P, k as i32)
}

/// `-i kappa^2 I(psibar C - psi Cbar)`, integrated strictly.
fn a_nonlocal_part(c: &FieldPair) -> Result<DiffPoly> {
    let psi = DiffPoly::field(Field::Psi);
    let psibar = DiffPoly::field(Field::PsiBar);
    let density = &(&psibar * &c.upper) - &(&psi * &c.lower);
    let k = &-&MultiPoly::i() * &MultiPoly::var(Var::Kappa2);
    Ok(integrate_exact(&density)?.scale(&k))
}

/// `C_N = sum_{k<N} p^(N-1-k) R^k (psi, psibar)`, `A_N = -p^N/2 - i kappa^2 I(psibar C_N - psi Cbar_N)`.
pub fn lax_coefficients(n: u32) -> Result<LaxCoefficients> {
    let mut c = FieldPair::zero();
    for k in 0..n {
        c = c.add(&recursion_power(k)?.scale(&p_pow(n - 1 - k)));
    }
    let top = DiffPoly::constant(p_pow(n).scale(&GaussianRational::from_ratio(-1, 2)));
    let a = &top + &a_nonlocal_part(&c)?;
    Ok(LaxCoefficients { c, a })
}

/// Divided-difference form `C = [(E(R) - E(p)) / (R - p)] (psi, psibar)` and
/// `A = -E(p)/2 - i kappa^2 I(psibar C - psi Cbar)`, with `E0` included in `E(p)`.
pub fn lax_general(dispersion: &DispersionSeries) -> Result<LaxCoefficients> {
    let mut c = FieldPair::zero();
    for (n, e) in dispersion.coeffs() {
        for k in 0..n {
            c = c.add(&recursion_power(k)?.scale(&(e * &p_pow(n - 1 - k))));
        }
    }
    let energy = dispersion.rest_energy() + &dispersion.shifted_symbolic();
    let top = DiffPoly::constant(energy.scale(&GaussianRational::from_ratio(-1, 2)));
    let a = &top + &a_nonlocal_part(&c)?;
    Ok(LaxCoefficients { c, a })
}

/// `J1 = [[-i p/2, -kappa^2 psibar], [psi, i p/2]]` and the matching time part.
#[derive(Clone, Debug, PartialEq)]
pub struct LaxPair {
    pub j1: Matrix2,
    pub j0: Matrix2,
}

impl LaxPair {
    pub fn space_part() -> Matrix2 {
        let half_ip = DiffPoly::constant(&MultiPoly::i() * &MultiPoly::var(Var::P)).scale_const(&GaussianRational::from_ratio(1, 2));
        let k = MultiPoly::var(Var::Kappa2);
        [
            [-&half_ip, DiffPoly::field(Field::PsiBar).scale(&-&k)],
            [DiffPoly::field(Field::Psi), half_ip],
        ]
    }

    /// `J0 = [[-i A, -kappa^2 Cbar], [C, i A]]` with every coefficient evaluated at `-p`.
    ///
    /// The reflection matches the spectral parameter of `J1`: with it the
    /// zero-curvature condition reproduces `i sigma_3 (psi, psibar)_t = R^N (psi, psibar)`.
    pub fn from_coefficients(lc: &LaxCoefficients) -> Self {
        let minus_p = -MultiPoly::var(Var::P);
        let reflect = |d: &DiffPoly| d.subs(Var::P, &minus_p);
        let i = MultiPoly::i();
        let k = MultiPoly::var(Var::Kappa2);
        let a = reflect(&lc.a);
        let j0 = [
            [a.scale(&-&i), reflect(&lc.c.lower).scale(&-&k)],
            [reflect(&lc.c.upper), a.scale(&i)],
        ];
        Self { j1: Self::space_part(), j0 }
    }

    pub fn for_flow(n: u32) -> Result<Self> {
        Ok(Self::from_coefficients(&lax_coefficients(n)?))
    }

    pub fn for_dispersion(dispersion: &DispersionSeries) -> Result<Self> {
        Ok(Self::from_coefficients(&lax_general(dispersion)?))
    }
}

/// `d/dt f` along the evolution with the given `(psi_t, psibar_t)`.
pub fn time_derivative(f: &DiffPoly, velocity: &FieldPair) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for j in f.jets() {
        let base = match j.field {
            Field::Psi => &velocity.upper,
            Field::PsiBar => &velocity.lower,
            Field::V | Field::Vt => continue,
        };
        out.add_assign_ref(&(&f.partial(&j) * &base.dx_n(j.order)));
    }
    out
}

fn matmul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let entry = |r: usize, c: usize| &(&a[r][0] * &b[0][c]) + &(&a[r][1] * &b[1][c]);
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

/// One nonzero coefficient of the residual.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualEntry {
    pub row: usize,
    pub col: usize,
    pub p_power: i32,
    pub residual: String,
}

#[derive(Clone, Debug)]
pub struct ZeroCurvatureReport {
    pub matrix: Matrix2,
}

impl ZeroCurvatureReport {
    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(DiffPoly::is_zero)
    }

    /// Nonzero entries split by power of `p`.
    pub fn entries(&self) -> Vec<ResidualEntry> {
        let mut out = Vec::new();
        for (row, r) in self.matrix.iter().enumerate() {
            for (col, d) in r.iter().enumerate() {
                for (p_power, part) in d.split_by(Var::P) {
                    if !part.is_zero() {
                        out.push(ResidualEntry { row, col, p_power, residual: part.to_string() });
                    }
                }
            }
        }
        out
    }
}

/// `d_t J1 - d_x J0 + [J1, J0]` with `psi_t`, `psibar_t` taken from `flow`
/// (the right-hand side of `i sigma_3 (psi, psibar)_t = flow`).
pub fn zero_curvature_residual(lax: &LaxPair, flow: &FieldPair) -> ZeroCurvatureReport {
    let velocity = flow.velocity();
    let j1j0 = matmul(&lax.j1, &lax.j0);
    let j0j1 = matmul(&lax.j0, &lax.j1);
    let entry = |r: usize, c: usize| {
        let mut e = time_derivative(&lax.j1[r][c], &velocity);
        e.sub_assign_ref(&lax.j0[r][c].total_x_derivative());
        e.add_assign_ref(&j1j0[r][c]);
        e.sub_assign_ref(&j0j1[r][c]);
        e
    };
    ZeroCurvatureReport { matrix: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]] }
}
