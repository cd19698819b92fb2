//! Truncated dispersion series `E(p) = E0 + sum_N E_N p^N`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::poly::{Assignment, MultiPoly, Var};
use super::rational::GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DispersionKind {
    #[serde(alias = "nr")]
    Nonrelativistic,
    #[serde(alias = "sr")]
    Semirelativistic,
}

/// Anything a dispersion series can act on: it only needs addition and
/// scaling by `MultiPoly` coefficients.
pub trait SeriesTarget: Sized + Clone {
    fn zero_like(&self) -> Self;
    fn scaled(&self, c: &MultiPoly) -> Self;
    fn plus(&self, other: &Self) -> Self;
}

impl SeriesTarget for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero()
    }
    fn scaled(&self, c: &MultiPoly) -> Self {
        self * c
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

impl SeriesTarget for super::diffpoly::DiffPoly {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn scaled(&self, c: &MultiPoly) -> Self {
        self.scale(c)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

/// `E(p)` as a finite series with coefficients in `(hbar, m, eps)`.
///
/// `coeffs` never holds the constant term: the rest energy `E0` is kept apart so
/// that the shifted series `E(p) - E0` is what the operators act with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DispersionSeries {
    coeffs: BTreeMap<u32, MultiPoly>,
    rest_energy: MultiPoly,
    max_degree: u32,
    kind: Option<DispersionKind>,
    eps_order: Option<u32>,
}

/// `binom(1/2, j)`.
fn half_binomial(j: u32) -> BigRational {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut acc = BigRational::one();
    for k in 0..j {
        acc = acc * (&half - BigRational::from_integer(k.into())) / BigRational::from_integer((k + 1).into());
    }
    acc
}

impl DispersionSeries {
    /// `E(p) = p^2 / 2m`.
    pub fn nonrelativistic() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(2, &MultiPoly::ratio(1, 2) * &MultiPoly::var_pow(Var::M, -1));
        Self {
            coeffs,
            rest_energy: MultiPoly::zero(),
            max_degree: 2,
            kind: Some(DispersionKind::Nonrelativistic),
            eps_order: None,
        }
    }

    /// Binomial expansion of `m c^2 sqrt(1 + eps p^2 / m^2)` with `eps = 1/c^2`,
    /// keeping terms of eps-order `<= eps_order` and p-degree `<= degree_cap`.
    /// The rest energy is `m / eps`.
    pub fn semirelativistic(eps_order: u32, degree_cap: u32) -> Self {
        assert!(degree_cap >= 2, "degree cap must be at least 2");
        let mut coeffs = BTreeMap::new();
        let mut j = 1u32;
        while 2 * j <= degree_cap && j - 1 <= eps_order {
            let c = GaussianRational::real(half_binomial(j));
            let mut mono = MultiPoly::var_pow(Var::Eps, (j - 1) as i32);
            mono = &mono * &MultiPoly::var_pow(Var::M, 1 - 2 * j as i32);
            coeffs.insert(2 * j, mono.scale(&c));
            j += 1;
        }
        let max_degree = coeffs.keys().copied().max().unwrap_or(0);
        Self {
            coeffs,
            rest_energy: &MultiPoly::var(Var::M) * &MultiPoly::var_pow(Var::Eps, -1),
            max_degree,
            kind: Some(DispersionKind::Semirelativistic),
            eps_order: Some(eps_order),
        }
    }

    /// Default cap keeps every term allowed by the eps-order.
    pub fn make(kind: DispersionKind, eps_order: u32, degree_cap: Option<u32>) -> Self {
        match kind {
            DispersionKind::Nonrelativistic => Self::nonrelativistic(),
            DispersionKind::Semirelativistic => {
                Self::semirelativistic(eps_order, degree_cap.unwrap_or(2 * (eps_order + 1)))
            }
        }
    }

    /// Arbitrary series; `coeffs[0]` (if given) becomes the rest energy.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (u32, MultiPoly)>) -> Self {
        let mut map = BTreeMap::new();
        let mut rest = MultiPoly::zero();
        for (n, c) in coeffs {
            if n == 0 {
                rest = c;
            } else if !c.is_zero() {
                map.insert(n, c);
            }
        }
        let max_degree = map.keys().copied().max().unwrap_or(0);
        Self { coeffs: map, rest_energy: rest, max_degree, kind: None, eps_order: None }
    }

    pub fn kind(&self) -> Option<DispersionKind> {
        self.kind
    }

    pub fn eps_order(&self) -> Option<u32> {
        self.eps_order
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn rest_energy(&self) -> &MultiPoly {
        &self.rest_energy
    }

    /// `E_N` for `N >= 1` (zero when absent).
    pub fn coeff(&self, n: u32) -> MultiPoly {
        self.coeffs.get(&n).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &MultiPoly)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    /// Series of `E'(p)`; its constant term is `E_1`.
    pub fn derivative(&self) -> DerivativeSeries {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, c)| (n - 1, c.scale(&GaussianRational::from_int(*n as i64))))
            .collect();
        DerivativeSeries { coeffs }
    }

    /// Applies `Ẽ(L) = sum_N E_N L^N` to `seed`, where `op` realizes `L`.
    pub fn apply_shifted<T, E>(&self, seed: &T, mut op: impl FnMut(&T) -> Result<T, E>) -> Result<T, E>
    where
        T: SeriesTarget,
    {
        let mut acc = seed.zero_like();
        let mut power = seed.clone();
        let mut k = 0u32;
        for (n, c) in &self.coeffs {
            while k < *n {
                power = op(&power)?;
                k += 1;
            }
            acc = acc.plus(&power.scaled(c));
        }
        Ok(acc)
    }

    /// `E(p) - E0` as a polynomial in `p`.
    pub fn shifted_symbolic(&self) -> MultiPoly {
        let p = MultiPoly::var(Var::P);
        let mut acc = MultiPoly::zero();
        for (n, c) in &self.coeffs {
            acc.add_assign_ref(&(c * &p.pow(*n)));
        }
        acc
    }

    /// Same series with `eps` set to zero (the rest energy is dropped).
    pub fn at_eps_zero(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, c)| (*n, c.subs(Var::Eps, &MultiPoly::zero())))
            .filter(|(_, c)| !c.is_zero())
            .collect::<BTreeMap<_, _>>();
        let max_degree = coeffs.keys().copied().max().unwrap_or(0);
        Self { coeffs, rest_energy: MultiPoly::zero(), max_degree, kind: self.kind, eps_order: Some(0) }
    }

    /// Numeric coefficients `E_N` for given `hbar, m, eps` (indexed by N).
    pub fn numeric_coeffs(&self, values: &Assignment) -> Vec<(u32, f64)> {
        self.coeffs.iter().map(|(n, c)| (*n, c.eval(values).re)).collect()
    }

    /// `E(p) - E0` at a real momentum.
    pub fn eval_shifted(&self, p: f64, values: &Assignment) -> f64 {
        self.numeric_coeffs(values).iter().map(|(n, c)| c * p.powi(*n as i32)).sum()
    }

    pub fn linear_combination(a: &MultiPoly, e1: &Self, b: &MultiPoly, e2: &Self) -> Self {
        let mut coeffs: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (n, c) in &e1.coeffs {
            coeffs.entry(*n).or_default().add_assign_ref(&(c * a));
        }
        for (n, c) in &e2.coeffs {
            coeffs.entry(*n).or_default().add_assign_ref(&(c * b));
        }
        coeffs.retain(|_, c| !c.is_zero());
        let rest = &(&e1.rest_energy * a) + &(&e2.rest_energy * b);
        let max_degree = coeffs.keys().copied().max().unwrap_or(0);
        Self { coeffs, rest_energy: rest, max_degree, kind: None, eps_order: None }
    }
}

/// `E'(p) = sum_N D_N p^N`, including a possible constant `D_0 = E_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeSeries {
    coeffs: BTreeMap<u32, MultiPoly>,
}

impl DerivativeSeries {
    pub fn coeff(&self, n: u32) -> MultiPoly {
        self.coeffs.get(&n).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &MultiPoly)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    /// `E'(L) seed`, including the constant term.
    pub fn apply<T, E>(&self, seed: &T, mut op: impl FnMut(&T) -> Result<T, E>) -> Result<T, E>
    where
        T: SeriesTarget,
    {
        let mut acc = seed.zero_like();
        let mut power = seed.clone();
        let mut k = 0u32;
        for (n, c) in &self.coeffs {
            while k < *n {
                power = op(&power)?;
                k += 1;
            }
            acc = acc.plus(&power.scaled(c));
        }
        Ok(acc)
    }

    pub fn eval(&self, p: f64, values: &Assignment) -> f64 {
        self.coeffs.iter().map(|(n, c)| c.eval(values).re * p.powi(*n as i32)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m_pow(e: i32) -> MultiPoly {
        MultiPoly::var_pow(Var::M, e)
    }

    #[test]
    fn nonrelativistic_coefficients() {
        let d = DispersionSeries::nonrelativistic();
        assert_eq!(d.coeffs().count(), 1);
        assert_eq!(d.coeff(2), &MultiPoly::ratio(1, 2) * &m_pow(-1));
    }

    #[test]
    fn semirelativistic_first_order() {
        let d = DispersionSeries::semirelativistic(1, 4);
        assert_eq!(d.coeff(2), &MultiPoly::ratio(1, 2) * &m_pow(-1));
        assert_eq!(d.coeff(4), &(&MultiPoly::ratio(-1, 8) * &m_pow(-3)) * &MultiPoly::var(Var::Eps));
        assert!(d.coeff(6).is_zero());
    }

    #[test]
    fn semirelativistic_second_order_adds_sixth_power() {
        let d = DispersionSeries::semirelativistic(2, 6);
        let expected = &(&MultiPoly::ratio(1, 16) * &m_pow(-5)) * &MultiPoly::var_pow(Var::Eps, 2);
        assert_eq!(d.coeff(6), expected);
    }

    #[test]
    fn degree_cap_and_eps_order_both_truncate() {
        assert!(DispersionSeries::semirelativistic(3, 4).coeff(6).is_zero());
        assert!(DispersionSeries::semirelativistic(0, 8).coeff(4).is_zero());
    }

    #[test]
    fn eps_zero_is_nonrelativistic() {
        for k in 0..4 {
            let d = DispersionSeries::semirelativistic(k, 2 * (k + 1)).at_eps_zero();
            assert_eq!(d.shifted_symbolic(), DispersionSeries::nonrelativistic().shifted_symbolic());
        }
    }

    #[test]
    fn derivative_series() {
        let d = DispersionSeries::semirelativistic(1, 4).derivative();
        assert_eq!(d.coeff(1), m_pow(-1));
        assert_eq!(d.coeff(3), &(&MultiPoly::ratio(-1, 2) * &m_pow(-3)) * &MultiPoly::var(Var::Eps));
    }

    #[test]
    fn numeric_series_matches_square_root() {
        let d = DispersionSeries::semirelativistic(4, 10);
        let (m, c) = (1.3_f64, 7.0_f64);
        let vals = Assignment::new().with(Var::M, m).with(Var::Eps, 1.0 / (c * c));
        let p = 0.4;
        let exact = m * c * c * ((1.0 + p * p / (m * m * c * c)).sqrt() - 1.0);
        assert!((d.eval_shifted(p, &vals) - exact).abs() < 1e-12);
    }
}
