//! Sparse Laurent polynomials in x, y, z and the input grammar used by the
//! family registry.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("parse error at byte {0}: {1}")]
    Parse(usize, String),
    #[error("division only by monomials is supported (divisor has {0} terms)")]
    NonMonomialDivisor(usize),
    #[error("coefficient not divisible in monomial division")]
    Indivisible,
    #[error("exponent must be a nonnegative integer")]
    BadExponent,
}

pub type Exp3 = [i64; 3];

/// Laurent polynomial in Z[x^+-1, y^+-1, z^+-1], sparse, no zero terms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPolynomial3 {
    pub terms: HashMap<Exp3, BigInt>,
}

impl LaurentPolynomial3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigInt) -> Self {
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert([0, 0, 0], c);
        }
        LaurentPolynomial3 { terms }
    }

    pub fn monomial(e: Exp3, c: BigInt) -> Self {
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPolynomial3 { terms }
    }

    pub fn variable(i: usize) -> Self {
        let mut e = [0i64; 3];
        e[i] = 1;
        Self::monomial(e, BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exp3) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&[0, 0, 0])
    }

    fn insert(&mut self, e: Exp3, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(*e, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial3 {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPolynomial3::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.insert(
                    [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]],
                    c1 * c2,
                );
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(BigInt::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Division by a one-term Laurent polynomial.
    pub fn div_monomial(&self, d: &Self) -> Result<Self, LaurentError> {
        if d.terms.len() != 1 {
            return Err(LaurentError::NonMonomialDivisor(d.terms.len()));
        }
        let (de, dc) = d.terms.iter().next().unwrap();
        let mut out = LaurentPolynomial3::zero();
        for (e, c) in &self.terms {
            let (q, r) = num_integer::Integer::div_rem(c, dc);
            if !r.is_zero() {
                return Err(LaurentError::Indivisible);
            }
            out.insert([e[0] - de[0], e[1] - de[1], e[2] - de[2]], q);
        }
        Ok(out)
    }

    pub fn support(&self) -> Vec<Exp3> {
        let mut s: Vec<Exp3> = self.terms.keys().copied().collect();
        s.sort();
        s
    }
}

/// Parse the registry grammar: integer coefficients, variables x y z,
/// operators + - * / ^ and parentheses; division only by (products of)
/// monomials.
pub fn parse_laurent(input: &str) -> Result<LaurentPolynomial3, LaurentError> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(LaurentError::Parse(p.pos, "trailing input".into()));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPolynomial3, LaurentError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op) = self.peek() {
            match op {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPolynomial3, LaurentError> {
        let mut acc = self.power()?;
        while let Some(op) = self.peek() {
            match op {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                b'/' => {
                    self.pos += 1;
                    acc = acc.div_monomial(&self.power()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<LaurentPolynomial3, LaurentError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let k = self.integer()?;
                    let k: u32 = k.to_string().parse().map_err(|_| LaurentError::BadExponent)?;
                    Ok(base.pow(k))
                }
                _ => Err(LaurentError::BadExponent),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<LaurentPolynomial3, LaurentError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(LaurentError::Parse(self.pos, "expected ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(LaurentPolynomial3::variable(0))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(LaurentPolynomial3::variable(1))
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(LaurentPolynomial3::variable(2))
            }
            Some(c) if c.is_ascii_digit() => Ok(LaurentPolynomial3::constant(self.integer()?)),
            _ => Err(LaurentError::Parse(self.pos, "expected atom".into())),
        }
    }

    fn integer(&mut self) -> Result<BigInt, LaurentError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(LaurentError::Parse(self.pos, "expected integer".into()));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }
}

impl std::fmt::Display for LaurentPolynomial3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for e in self.support() {
            let c = &self.terms[&e];
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            let mut printed = false;
            if !a.is_one() || e == [0, 0, 0] {
                write!(f, "{}", a)?;
                printed = true;
            }
            for (i, v) in ["x", "y", "z"].iter().enumerate() {
                if e[i] != 0 {
                    if printed {
                        write!(f, "*")?;
                    }
                    if e[i] == 1 {
                        write!(f, "{}", v)?;
                    } else {
                        write!(f, "{}^{}", v, e[i])?;
                    }
                    printed = true;
                }
            }
        }
        Ok(())
    }
}
