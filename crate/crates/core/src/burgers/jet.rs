//! Truncated derivative jets `[f, f', f'', ...]` at a point, with Leibniz
//! arithmetic, and numeric evaluation of differential polynomials on them.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::algebra::{Assignment, DiffPoly, Field};
use crate::error::{Error, Result};

fn binomials(k: usize) -> Vec<f64> {
    let mut row = vec![1.0; k + 1];
    for j in 1..k {
        row[j] = row[j - 1] * (k - j + 1) as f64 / j as f64;
    }
    row
}

/// Derivatives `f^(0..=order)` of a function at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct NumJet(pub Vec<Complex64>);

impl NumJet {
    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); order + 1];
        v[0] = c;
        Self(v)
    }

    /// The identity function `x` at `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut j = Self::constant(Complex64::new(x0, 0.0), order);
        if order >= 1 {
            j.0[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self) -> Complex64 {
        self.0[0]
    }

    /// Jet of the derivative; one order shorter.
    pub fn shift(&self) -> Self {
        assert!(self.order() >= 1, "cannot differentiate an order-0 jet");
        Self(self.0[1..].to_vec())
    }

    pub fn truncated(&self, order: usize) -> Self {
        Self(self.0[..=order.min(self.order())].to_vec())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * c).collect())
    }

    /// `self / other` by the Leibniz recursion; fails when `other` vanishes.
    pub fn div(&self, other: &NumJet) -> Result<NumJet> {
        let g0 = other.value();
        if g0 == Complex64::new(0.0, 0.0) || !g0.is_finite() {
            return Err(Error::InvalidParameter("division by a vanishing jet".into()));
        }
        let order = self.order().min(other.order());
        let mut h: Vec<Complex64> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let b = binomials(k);
            let mut acc = self.0[k];
            for j in 1..=k {
                acc -= other.0[j] * h[k - j] * b[j];
            }
            h.push(acc / g0);
        }
        Ok(NumJet(h))
    }
}

impl Add for &NumJet {
    type Output = NumJet;
    fn add(self, rhs: &NumJet) -> NumJet {
        NumJet(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &NumJet {
    type Output = NumJet;
    fn sub(self, rhs: &NumJet) -> NumJet {
        NumJet(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul for &NumJet {
    type Output = NumJet;
    fn mul(self, rhs: &NumJet) -> NumJet {
        let order = self.order().min(rhs.order());
        NumJet(
            (0..=order)
                .map(|k| {
                    let b = binomials(k);
                    (0..=k).map(|j| self.0[j] * rhs.0[k - j] * b[j]).sum()
                })
                .collect(),
        )
    }
}

/// Evaluates a local differential polynomial in `V` (and optionally `V_t`) at
/// a point, given the derivatives of `V` there and numeric values for the
/// coefficient symbols.
pub fn eval_on_jet(f: &DiffPoly, values: &Assignment, v: &NumJet, vt: Option<&NumJet>) -> Result<Complex64> {
    if !f.is_local() {
        return Err(Error::InvalidParameter("cannot evaluate a nonlocal expression pointwise".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (mono, c) in f.terms() {
        let mut term = c
            .try_eval(values)
            .ok_or_else(|| Error::InvalidParameter(format!("unassigned symbol in coefficient {c}")))?;
        for (j, &e) in &mono.jets {
            let source = match (j.field, vt) {
                (Field::V, _) => v,
                (Field::Vt, Some(vt)) => vt,
                _ => return Err(Error::InvalidParameter(format!("no values for field {}", j.field.name()))),
            };
            let z = source.0.get(j.order as usize).ok_or_else(|| {
                Error::InvalidParameter(format!("jet of order {} needed, have {}", j.order, source.order()))
            })?;
            term *= z.powu(e);
        }
        acc += term;
    }
    Ok(acc)
}

/// `f, Df, ..., D^order f` precomputed for repeated pointwise evaluation; `D`
/// is the total x-derivative, explicit `x` included.
#[derive(Clone, Debug)]
pub struct JetEvaluator {
    chain: Vec<DiffPoly>,
}

impl JetEvaluator {
    pub fn new(f: &DiffPoly, order: usize) -> Self {
        let mut chain = vec![f.clone()];
        for _ in 0..order {
            let next = chain.last().unwrap().total_x_derivative();
            chain.push(next);
        }
        Self { chain }
    }

    pub fn order(&self) -> usize {
        self.chain.len() - 1
    }

    /// Highest derivative of `V` the evaluation reads.
    pub fn required_order(&self) -> usize {
        self.chain.iter().filter_map(|g| g.max_order()).max().unwrap_or(0) as usize
    }

    pub fn eval(&self, values: &Assignment, v: &NumJet) -> Result<NumJet> {
        self.chain.iter().map(|g| eval_on_jet(g, values, v, None)).collect::<Result<Vec<_>>>().map(NumJet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sym, Var};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn exp_jet(a: f64, x: f64, order: usize) -> NumJet {
        NumJet((0..=order).map(|k| c(a.powi(k as i32) * (a * x).exp())).collect())
    }

    #[test]
    fn product_of_exponentials() {
        let p = &exp_jet(0.7, 0.3, 5) * &exp_jet(-1.9, 0.3, 5);
        let q = exp_jet(-1.2, 0.3, 5);
        for (a, b) in p.0.iter().zip(&q.0) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn division_inverts_product() {
        let f = NumJet(vec![c(1.0), c(-2.0), c(0.5), c(3.0), c(-1.0)]);
        let g = NumJet(vec![c(2.0), Complex64::new(0.0, 1.0), c(4.0), c(0.25), c(1.0)]);
        let h = (&f * &g).div(&g).unwrap();
        for (a, b) in h.0.iter().zip(&f.0) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn reciprocal_of_x() {
        // d^k/dx^k (1/x) = (-1)^k k! / x^(k+1)
        let x0 = 1.7;
        let r = NumJet::constant(c(1.0), 4).div(&NumJet::variable(x0, 4)).unwrap();
        let mut fact = 1.0;
        for k in 0..=4 {
            if k > 0 {
                fact *= k as f64;
            }
            let want = (-1f64).powi(k as i32) * fact / x0.powi(k as i32 + 1);
            assert!((r.0[k] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn jet_chain_includes_explicit_x() {
        // f = x V^2 with V = sin: Df = V^2 + 2 x V V_x.
        let f = DiffPoly::field(Field::V).pow(2).scale(&sym(Var::X));
        let x0: f64 = 0.4;
        let v = NumJet(vec![c(x0.sin()), c(x0.cos()), c(-x0.sin()), c(-x0.cos())]);
        let vals = Assignment::new().with(Var::X, x0);
        let j = JetEvaluator::new(&f, 1).eval(&vals, &v).unwrap();
        assert!((j.0[0] - x0 * x0.sin().powi(2)).norm() < 1e-14);
        let want = x0.sin().powi(2) + 2.0 * x0 * x0.sin() * x0.cos();
        assert!((j.0[1] - want).norm() < 1e-14);
    }
}
