//! Dense univariate polynomials over Z and Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Polynomial over the integers, stored coefficient-ascending with no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ZPoly {
    pub coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        ZPoly::new(vec![BigInt::one()])
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        ZPoly::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn monomial(coeff: BigInt, deg: usize) -> Self {
        let mut v = vec![BigInt::zero(); deg + 1];
        v[deg] = coeff;
        ZPoly::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + other.coeff(i));
        }
        ZPoly::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - other.coeff(i));
        }
        ZPoly::new(v)
    }

    pub fn neg(&self) -> Self {
        ZPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        ZPoly::new(v)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        ZPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    pub fn eval_q(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_z(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        ZPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact division; panics if the division is not exact.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.to_qpoly().divrem(&d.to_qpoly());
        assert!(r.is_zero(), "div_exact: remainder nonzero");
        q.clear_denominators().0
    }

    /// True iff `d` divides self exactly over Q.
    pub fn divisible_by(&self, d: &Self) -> bool {
        if d.is_zero() {
            return self.is_zero();
        }
        let (_, r) = self.to_qpoly().divrem(&d.to_qpoly());
        r.is_zero()
    }

    /// p(t + c), by Horner in (t + c).
    pub fn shift(&self, c: i64) -> Self {
        let mut acc = ZPoly::zero();
        let shift_base = ZPoly::from_i64(&[c, 1]);
        for coef in self.coeffs.iter().rev() {
            acc = acc.mul(&shift_base);
            acc = acc.add(&ZPoly::new(vec![coef.clone()]));
        }
        acc
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Primitive gcd over Z (computed via monic gcd over Q).
    pub fn gcd(&self, other: &Self) -> Self {
        let g = self.to_qpoly().gcd(&other.to_qpoly());
        g.clear_denominators().0.normalized()
    }

    /// Squarefree part: self / gcd(self, self').
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() || self.degree() == 0 {
            return self.normalized();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.normalized();
        }
        self.div_exact(&g).normalized()
    }

    /// All rational roots with multiplicity 1 reporting (roots of the
    /// squarefree part), found by the rational root theorem.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let p = self.squarefree_part();
        if p.is_zero() || p.degree() == 0 {
            return vec![];
        }
        let mut roots = vec![];
        // t = 0
        let mut q = p.clone();
        if q.coeffs[0].is_zero() {
            roots.push(BigRational::zero());
            while q.coeffs[0].is_zero() {
                q = ZPoly::new(q.coeffs[1..].to_vec());
            }
        }
        if q.degree() == 0 {
            return roots;
        }
        let a0 = q.coeffs[0].abs();
        let an = q.leading().abs();
        for p_div in divisors(&a0) {
            for q_div in divisors(&an) {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(&p_div * BigInt::from(sign), q_div.clone());
                    if q.eval_q(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{}", a)?,
                1 if a.is_one() => write!(f, "t")?,
                1 => write!(f, "{}*t", a)?,
                _ if a.is_one() => write!(f, "t^{}", i)?,
                _ => write!(f, "{}*t^{}", a, i)?,
            }
            first = false;
        }
        Ok(())
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Small-number path is all we need: leading/trailing coefficients of
    // guessed operators stay modest after normalization.
    let mut out = vec![];
    if n.is_zero() {
        return out;
    }
    let n = n.abs();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
        if out.len() > 4096 {
            break; // give up on pathological inputs
        }
    }
    out.sort();
    out
}

/// Polynomial over the rationals.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QPoly {
    pub coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly::new(vec![BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly::new(v)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let dl = d.leading();
        if r.len() <= dd {
            return (QPoly::zero(), QPoly::new(r));
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = &r[i] / &dl;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                let t = &c * dc;
                r[idx] -= t;
            }
            q[i - dd] = c;
        }
        (QPoly::new(q), QPoly::new(r))
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.leading();
        a.scale(&(BigRational::one() / l))
    }

    /// Clear denominators: returns (integer polynomial, common denominator)
    /// so that self = zpoly / denom.
    pub fn clear_denominators(&self) -> (ZPoly, BigInt) {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let z = ZPoly::new(
            self.coeffs
                .iter()
                .map(|c| c.numer() * (&den / c.denom()))
                .collect(),
        );
        (z, den)
    }
}
