//! Parser for the canonical text form printed by `MultiPoly` and `DiffPoly`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::diffpoly::{DiffMonomial, DiffPoly, Field, Jet};
use super::poly::{Monomial, MultiPoly, Var};
use super::rational::GaussianRational;
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Self { src: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", b as char))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<BigInt>().or_else(|_| self.err("expected integer"))
    }

    fn small_int(&mut self) -> Result<i64> {
        let v = self.int()?;
        i64::try_from(v).or_else(|_| self.err("exponent out of range"))
    }

    fn ratio(&mut self) -> Result<BigRational> {
        let num = self.int()?;
        if self.eat(b'/') {
            let den = self.int()?;
            if den == BigInt::from(0) {
                return self.err("zero denominator");
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected identifier");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    /// `a`, `a*i`, `a+b*i`, `a-b*i`
    fn coeff(&mut self) -> Result<GaussianRational> {
        let first = self.ratio()?;
        if self.lookahead_star_i() {
            self.pos += 2;
            return Ok(GaussianRational::new(BigRational::from_integer(0.into()), first));
        }
        self.skip_ws();
        match self.peek() {
            Some(b'+') | Some(b'-') => {
                let neg = self.peek() == Some(b'-');
                self.pos += 1;
                let mut im = self.ratio()?;
                if neg {
                    im = -im;
                }
                if !self.lookahead_star_i() {
                    return self.err("expected '*i'");
                }
                self.pos += 2;
                Ok(GaussianRational::new(first, im))
            }
            _ => Ok(GaussianRational::real(first)),
        }
    }

    fn lookahead_star_i(&mut self) -> bool {
        self.skip_ws();
        self.src.get(self.pos) == Some(&b'*') && self.src.get(self.pos + 1) == Some(&b'i')
            && !self.src.get(self.pos + 2).is_some_and(|b| b.is_ascii_alphanumeric())
    }

    fn multipoly(&mut self) -> Result<MultiPoly> {
        self.skip_ws();
        if self.peek() == Some(b'0') && !self.src.get(self.pos + 1).is_some_and(|b| b.is_ascii_digit() || *b == b'/') {
            self.pos += 1;
            return Ok(MultiPoly::zero());
        }
        let mut out = MultiPoly::zero();
        loop {
            self.expect(b'(')?;
            let c = self.coeff()?;
            self.expect(b')')?;
            let mut mono = Monomial::one();
            loop {
                self.skip_ws();
                if self.peek() != Some(b'*') {
                    break;
                }
                self.pos += 1;
                let name = self.ident()?;
                let Some(v) = Var::from_name(name) else {
                    return self.err(format!("unknown symbol '{name}'"));
                };
                let e = if self.eat(b'^') { self.small_int()? as i32 } else { 1 };
                mono = mono.mul(&Monomial::var(v, e));
            }
            out.add_term(mono, &c);
            if !self.eat(b'+') {
                break;
            }
        }
        Ok(out)
    }

    fn diffpoly(&mut self) -> Result<DiffPoly> {
        self.skip_ws();
        if self.peek() == Some(b'0') {
            self.pos += 1;
            return Ok(DiffPoly::zero());
        }
        let mut out = DiffPoly::zero();
        loop {
            self.expect(b'{')?;
            let c = self.multipoly()?;
            self.expect(b'}')?;
            let mut mono = DiffMonomial::one();
            loop {
                self.skip_ws();
                if self.peek() != Some(b'*') {
                    break;
                }
                self.pos += 1;
                let name = self.ident()?;
                if name == "Int" {
                    self.expect(b'(')?;
                    let inner = self.diffpoly()?;
                    self.expect(b')')?;
                    if !inner.is_local() {
                        return Err(Error::NestedNonlocal);
                    }
                    mono.nonlocal.push(inner);
                    mono.nonlocal.sort();
                    continue;
                }
                let Some(field) = Field::from_name(name) else {
                    return self.err(format!("unknown field '{name}'"));
                };
                self.expect(b'[')?;
                let order = self.small_int()?;
                self.expect(b']')?;
                let e = if self.eat(b'^') { self.small_int()? } else { 1 };
                if order < 0 || e < 1 {
                    return self.err("jet order and exponent must be nonnegative");
                }
                mono = mono.with_jet_delta(Jet::new(field, order as u32), e);
            }
            out.add_term(mono, &c);
            if !self.eat(b'+') {
                break;
            }
        }
        Ok(out)
    }
}

impl FromStr for MultiPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let p = cur.multipoly()?;
        if !cur.at_end() {
            return cur.err("trailing input");
        }
        Ok(p)
    }
}

impl FromStr for DiffPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let p = cur.diffpoly()?;
        if !cur.at_end() {
            return cur.err("trailing input");
        }
        Ok(p)
    }
}
