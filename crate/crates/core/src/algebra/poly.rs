//! Sparse multivariate (Laurent) polynomials over Q(i).
//!
//! The symbol set is fixed: `x, t, hbar, m, eps, kappa2, p` plus four generic
//! user symbols `u0..u3`. Exponents are signed so that inverse masses can be
//! carried exactly; the helpers [`MultiPoly::is_polynomial_in`] and
//! [`MultiPoly::min_degree`] let callers enforce nonnegativity where required.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::rational::GaussianRational;

pub const NVARS: usize = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    T,
    Hbar,
    M,
    Eps,
    Kappa2,
    P,
    User(u8),
}

impl Var {
    pub const BUILTIN: [Var; 7] = [Var::X, Var::T, Var::Hbar, Var::M, Var::Eps, Var::Kappa2, Var::P];

    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::T => 1,
            Var::Hbar => 2,
            Var::M => 3,
            Var::Eps => 4,
            Var::Kappa2 => 5,
            Var::P => 6,
            Var::User(k) => {
                assert!(k < 4, "only four user symbols are available");
                7 + k as usize
            }
        }
    }

    pub fn from_index(i: usize) -> Var {
        match i {
            0 => Var::X,
            1 => Var::T,
            2 => Var::Hbar,
            3 => Var::M,
            4 => Var::Eps,
            5 => Var::Kappa2,
            6 => Var::P,
            k => Var::User((k - 7) as u8),
        }
    }

    pub fn name(self) -> &'static str {
        const NAMES: [&str; NVARS] =
            ["x", "t", "hbar", "m", "eps", "kappa2", "p", "u0", "u1", "u2", "u3"];
        NAMES[self.index()]
    }

    pub fn from_name(s: &str) -> Option<Var> {
        (0..NVARS).map(Var::from_index).find(|v| v.name() == s)
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [i32; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var, e: i32) -> Self {
        let mut m = Self::one();
        m.0[v.index()] = e;
        m
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0[v.index()]
    }

    pub fn total_degree(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        out
    }

    pub fn with_exp(&self, v: Var, e: i32) -> Monomial {
        let mut out = *self;
        out.0[v.index()] = e;
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Numeric values for symbols, used when evaluating.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    values: [Option<Complex64>; NVARS],
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, value: impl Into<Complex64>) -> Self {
        self.values[v.index()] = Some(value.into());
        self
    }

    pub fn set(&mut self, v: Var, value: impl Into<Complex64>) {
        self.values[v.index()] = Some(value.into());
    }

    pub fn get(&self, v: Var) -> Option<Complex64> {
        self.values[v.index()]
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(v: i64) -> Self {
        Self::constant(GaussianRational::from_int(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(GaussianRational::from_ratio(num, den))
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        Self::term(GaussianRational::one(), Monomial::var(v, e))
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, GaussianRational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in iter {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    /// The constant value if the polynomial has no symbols.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &MultiPoly) {
        for (m, c) in &other.terms {
            self.add_term(*m, c);
        }
    }

    pub fn sub_assign_ref(&mut self, other: &MultiPoly) {
        for (m, c) in &other.terms {
            self.add_term(*m, &-c);
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> MultiPoly {
        Self { terms: self.terms.iter().map(|(m, v)| (m.mul(mono), v.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn conj(&self) -> MultiPoly {
        Self { terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect() }
    }

    pub fn max_degree(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn min_degree(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exp(v)).min()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) != 0)
    }

    pub fn is_polynomial_in(&self, v: Var) -> bool {
        self.min_degree(v).is_none_or(|d| d >= 0)
    }

    pub fn derivative(&self, v: Var) -> MultiPoly {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e != 0 {
                out.add_term(m.with_exp(v, e - 1), &(c * &GaussianRational::from_int(e as i64)));
            }
        }
        out
    }

    /// Antiderivative in `v` with zero constant; `None` if a `v^-1` term is present.
    pub fn antiderivative(&self, v: Var) -> Option<MultiPoly> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == -1 {
                return None;
            }
            out.add_term(m.with_exp(v, e + 1), &(c / &GaussianRational::from_int(e as i64 + 1)));
        }
        Some(out)
    }

    /// Coefficient of `v^k`, with `v` removed.
    pub fn coeff(&self, v: Var, k: i32) -> MultiPoly {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) == k)
                .map(|(m, c)| (m.with_exp(v, 0), c.clone()))
                .collect(),
        }
    }

    /// Splits into coefficients of powers of `v`.
    pub fn split_by(&self, v: Var) -> BTreeMap<i32, MultiPoly> {
        let mut out: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp(v)).or_default().add_term(m.with_exp(v, 0), c);
        }
        out
    }

    /// Drops every term whose exponent of `v` exceeds `order`.
    pub fn truncate(&self, v: Var, order: i32) -> MultiPoly {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) <= order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Substitutes `v := value`. Negative powers of `v` require `value` to be a single term.
    pub fn subs(&self, v: Var, value: &MultiPoly) -> MultiPoly {
        let inverse = || -> MultiPoly {
            assert_eq!(value.len(), 1, "negative power substitution needs a monomial value");
            let (m, c) = value.terms.iter().next().unwrap();
            let mut inv = Monomial::one();
            for (dst, src) in inv.0.iter_mut().zip(m.0.iter()) {
                *dst = -src;
            }
            MultiPoly::term(c.inv().expect("substituting zero into a negative power"), inv)
        };
        let mut cache: BTreeMap<i32, MultiPoly> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let factor = cache
                .entry(e)
                .or_insert_with(|| {
                    if e >= 0 {
                        value.pow(e as u32)
                    } else {
                        inverse().pow((-e) as u32)
                    }
                })
                .clone();
            let rest = MultiPoly::term(c.clone(), m.with_exp(v, 0));
            out.add_assign_ref(&(&rest * &factor));
        }
        out
    }

    /// Evaluates with every present symbol assigned; panics on missing symbols.
    pub fn eval(&self, values: &Assignment) -> Complex64 {
        self.try_eval(values).expect("unassigned symbol in evaluation")
    }

    pub fn try_eval(&self, values: &Assignment) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut term = c.to_complex();
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    let val = values.values[i]?;
                    term *= val.powi(e);
                }
            }
            acc += term;
        }
        Some(acc)
    }

    /// Coefficients of `v^0..v^deg` after evaluating all other symbols.
    pub fn univariate_coeffs(&self, v: Var, values: &Assignment) -> Vec<Complex64> {
        let deg = self.max_degree(v).unwrap_or(0).max(0) as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (k, c) in self.split_by(v) {
            assert!(k >= 0, "negative power in univariate extraction");
            out[k as usize] += c.eval(values);
        }
        out
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

pub(crate) fn fmt_monomial(m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => write!(f, "*{}", Var::from_index(i).name())?,
            _ => write!(f, "*{}^{}", Var::from_index(i).name(), e)?,
        }
    }
    Ok(())
}

/// Canonical text: terms in descending graded-lex order, each `(coeff)*sym^e*...`,
/// joined by ` + `. The zero polynomial prints as `0`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            fmt_monomial(m, f)?;
        }
        Ok(())
    }
}
