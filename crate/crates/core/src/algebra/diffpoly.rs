//! Differential polynomials in jet symbols `u^(k)` of a few field variables,
//! with `MultiPoly` coefficients and depth-1 formal antiderivative markers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::poly::{MultiPoly, Var};
use super::rational::GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Psi,
    PsiBar,
    /// Complex velocity of the Burgers-Schrodinger equations.
    V,
    /// Unresolved time derivative of `V`.
    Vt,
}

impl Field {
    pub const ALL: [Field; 4] = [Field::Psi, Field::PsiBar, Field::V, Field::Vt];

    pub fn name(self) -> &'static str {
        match self {
            Field::Psi => "psi",
            Field::PsiBar => "psibar",
            Field::V => "V",
            Field::Vt => "Vt",
        }
    }

    pub fn from_name(s: &str) -> Option<Field> {
        Field::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Formal conjugation swaps `psi` and `psibar`; other fields are fixed.
    pub fn conj(self) -> Field {
        match self {
            Field::Psi => Field::PsiBar,
            Field::PsiBar => Field::Psi,
            f => f,
        }
    }
}

/// `field^(order)`: the `order`-th x-derivative of a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Jet {
    pub field: Field,
    pub order: u32,
}

impl Jet {
    pub fn new(field: Field, order: u32) -> Self {
        Self { field, order }
    }

    /// Integration ranking: higher derivative order first, then field.
    pub fn rank(&self) -> (u32, Field) {
        (self.order, self.field)
    }

    pub fn prolong(&self) -> Jet {
        Jet { field: self.field, order: self.order + 1 }
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field.name(), self.order)
    }
}

/// A product of jet powers and antiderivative markers `Int(g)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DiffMonomial {
    pub jets: BTreeMap<Jet, u32>,
    /// Sorted; each marker's argument is local.
    pub nonlocal: Vec<DiffPoly>,
}

impl DiffMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.jets.is_empty() && self.nonlocal.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.jets.values().sum::<u32>() + self.nonlocal.len() as u32
    }

    pub fn exp(&self, j: &Jet) -> u32 {
        self.jets.get(j).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &DiffMonomial) -> DiffMonomial {
        let mut out = self.clone();
        for (j, e) in &other.jets {
            *out.jets.entry(*j).or_insert(0) += e;
        }
        if !other.nonlocal.is_empty() {
            out.nonlocal.extend(other.nonlocal.iter().cloned());
            out.nonlocal.sort();
        }
        out
    }

    /// Multiplies by `j^e` (`e` may be negative as long as the result stays nonnegative).
    pub fn with_jet_delta(&self, j: Jet, delta: i64) -> DiffMonomial {
        let mut out = self.clone();
        let cur = out.exp(&j) as i64 + delta;
        assert!(cur >= 0, "negative jet exponent");
        if cur == 0 {
            out.jets.remove(&j);
        } else {
            out.jets.insert(j, cur as u32);
        }
        out
    }

    fn conj(&self) -> DiffMonomial {
        let mut jets = BTreeMap::new();
        for (j, e) in &self.jets {
            jets.insert(Jet::new(j.field.conj(), j.order), *e);
        }
        let mut nonlocal: Vec<DiffPoly> = self.nonlocal.iter().map(DiffPoly::conj).collect();
        nonlocal.sort();
        DiffMonomial { jets, nonlocal }
    }
}

/// A differential polynomial. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DiffPoly {
    terms: BTreeMap<DiffMonomial, MultiPoly>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(MultiPoly::one())
    }

    pub fn constant(c: MultiPoly) -> Self {
        Self::term(c, DiffMonomial::one())
    }

    pub fn term(c: MultiPoly, m: DiffMonomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn jet(field: Field, order: u32) -> Self {
        let mut m = DiffMonomial::one();
        m.jets.insert(Jet::new(field, order), 1);
        Self::term(MultiPoly::one(), m)
    }

    pub fn field(field: Field) -> Self {
        Self::jet(field, 0)
    }

    /// The marker `Int(g)`; `g` must be local.
    pub fn nonlocal(g: DiffPoly) -> Self {
        assert!(g.is_local(), "antiderivative markers nest only to depth 1");
        if g.is_zero() {
            return Self::zero();
        }
        let m = DiffMonomial { jets: BTreeMap::new(), nonlocal: vec![g] };
        Self::term(MultiPoly::one(), m)
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&DiffMonomial, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, m: &DiffMonomial) -> MultiPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_local(&self) -> bool {
        self.terms.keys().all(|m| m.nonlocal.is_empty())
    }

    pub fn add_term(&mut self, m: DiffMonomial, c: &MultiPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                existing.add_assign_ref(c);
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &DiffPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub_assign_ref(&mut self, other: &DiffPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &-c);
        }
    }

    pub fn scale(&self, c: &MultiPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), &(v * c));
        }
        out
    }

    pub fn scale_const(&self, c: &GaussianRational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.scale(c))).collect() }
    }

    pub fn pow(&self, k: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    pub fn subs(&self, v: Var, value: &MultiPoly) -> DiffPoly {
        self.map_coeffs(|c| c.subs(v, value))
    }

    pub fn truncate(&self, v: Var, order: i32) -> DiffPoly {
        self.map_coeffs(|c| c.truncate(v, order))
    }

    /// Coefficients of the powers of `v`, each a `DiffPoly` free of `v`.
    pub fn split_by(&self, v: Var) -> BTreeMap<i32, DiffPoly> {
        let mut out: BTreeMap<i32, DiffPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (k, ck) in c.split_by(v) {
                out.entry(k).or_default().add_term(m.clone(), &ck);
            }
        }
        out
    }

    pub fn conj(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.conj(), &c.conj());
        }
        out
    }

    /// All jets present (outside markers).
    pub fn jets(&self) -> Vec<Jet> {
        let mut js: Vec<Jet> = self.terms.keys().flat_map(|m| m.jets.keys().copied()).collect();
        js.sort();
        js.dedup();
        js
    }

    pub fn max_order(&self) -> Option<u32> {
        self.jets().iter().map(|j| j.order).max()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.values().any(|c| c.contains(v))
    }

    /// Partial derivative with respect to one jet symbol.
    pub fn partial(&self, j: &Jet) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(j);
            if e > 0 {
                out.add_term(m.with_jet_delta(*j, -1), &c.scale(&GaussianRational::from_int(e as i64)));
            }
        }
        out
    }

    /// Total x-derivative: prolongs every jet, differentiates explicit `x` in
    /// coefficients, and maps `Int(g)` to `g`.
    pub fn total_x_derivative(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let dc = c.derivative(Var::X);
            if !dc.is_zero() {
                out.add_term(m.clone(), &dc);
            }
            for (j, &e) in &m.jets {
                let lowered = m.with_jet_delta(*j, -1).with_jet_delta(j.prolong(), 1);
                out.add_term(lowered, &c.scale(&GaussianRational::from_int(e as i64)));
            }
            for (k, g) in m.nonlocal.iter().enumerate() {
                let mut rest = m.clone();
                rest.nonlocal.remove(k);
                let rest_poly = DiffPoly::term(c.clone(), rest);
                out.add_assign_ref(&(&rest_poly * g));
            }
        }
        out
    }

    /// `n`-fold total x-derivative.
    pub fn dx_n(&self, n: u32) -> DiffPoly {
        (0..n).fold(self.clone(), |acc, _| acc.total_x_derivative())
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: DiffPoly) -> DiffPoly {
        &self + &rhs
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: DiffPoly) -> DiffPoly {
        &self - &rhs
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: DiffPoly) -> DiffPoly {
        &self * &rhs
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl From<MultiPoly> for DiffPoly {
    fn from(c: MultiPoly) -> Self {
        DiffPoly::constant(c)
    }
}

impl Zero for DiffPoly {
    fn zero() -> Self {
        DiffPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for DiffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, e) in &self.jets {
            if *e == 1 {
                write!(f, "*{j}")?;
            } else {
                write!(f, "*{j}^{e}")?;
            }
        }
        for g in &self.nonlocal {
            write!(f, "*Int({g})")?;
        }
        Ok(())
    }
}

/// Canonical text: terms in descending monomial order, each `{coeff}*psi[k]^e*Int(...)`.
impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{{{c}}}{m}")?;
        }
        Ok(())
    }
}
