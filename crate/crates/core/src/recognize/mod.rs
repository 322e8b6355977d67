//! Recognition of numerical constants: LLL lattice reduction, integer
//! relation detection, algebraic dependence (minimal polynomials), and
//! recognition of values of the form r * ln(alpha) with alpha algebraic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rug::ops::{CompleteRound, Pow};
use rug::Float;

use crate::exact::ZPoly;

#[cfg(test)]
mod tests;

#[derive(Debug, thiserror::Error)]
pub enum RecognizeError {
    #[error("precision too low: need at least 20 digits, got {0}")]
    PrecisionTooLow(u32),
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch")]
    DimensionMismatch,
}

/// A lattice given by integer basis row vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    pub basis: Vec<Vec<BigInt>>,
}

impl IntegerLattice {
    pub fn new(basis: Vec<Vec<BigInt>>) -> Self {
        IntegerLattice { basis }
    }

    /// Hermite normal form of the row span; two lattices are equal iff
    /// their HNFs agree.
    pub fn hnf(&self) -> Vec<Vec<BigInt>> {
        crate::exact::linalg::hermite_normal_form(&self.basis)
    }
}

/// Status of a recognition attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecognitionStatus {
    Recognized,
    Inconclusive,
}

/// A claimed exact form w = r * ln(alpha) for an algebraic alpha.
#[derive(Debug, Clone)]
pub struct LogRepresentation {
    /// Rational scale r.
    pub r: BigRational,
    /// Minimal polynomial of alpha (primitive, positive leading coefficient).
    pub alpha_minpoly: ZPoly,
    /// Floating-point approximation of alpha that selects the intended root.
    pub alpha_approx: f64,
    /// |w - r * ln(alpha)| after re-evaluating ln(alpha) at higher precision.
    pub residual: f64,
}

/// Outcome of `recognize_log_value`.
#[derive(Debug, Clone)]
pub struct RecognitionReport {
    pub status: RecognitionStatus,
    pub candidate: Option<LogRepresentation>,
    /// (working precision in digits, max minpoly degree, max coefficient height)
    pub search_parameters: (u32, u32, u64),
    /// residual divided by the noise floor 10^-(digits-10); recognized
    /// results always have confidence < 1e-5.
    pub confidence: f64,
}

// ---------------------------------------------------------------------------
// LLL over exact rationals
// ---------------------------------------------------------------------------

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_qz(a: &[BigRational], b: &[BigInt]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * BigRational::from(y.clone()))
        .sum()
}

fn dot_qq(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct GramSchmidt {
    /// orthogonalized vectors b*_i (rational)
    star: Vec<Vec<BigRational>>,
    /// mu[i][j] = <b_i, b*_j> / <b*_j, b*_j> for j < i
    mu: Vec<Vec<BigRational>>,
    /// squared norms of the b*_i
    norm2: Vec<BigRational>,
}

fn gram_schmidt(basis: &[Vec<BigInt>]) -> GramSchmidt {
    let n = basis.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu: Vec<Vec<BigRational>> = vec![vec![]; n];
    let mut norm2: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: Vec<BigRational> = basis[i]
            .iter()
            .map(|x| BigRational::from(x.clone()))
            .collect();
        let mut mus = Vec::with_capacity(i);
        for j in 0..i {
            let m = if norm2[j].is_zero() {
                BigRational::zero()
            } else {
                dot_qz(&star[j], &basis[i]) / norm2[j].clone()
            };
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &m * sk;
            }
            mus.push(m);
        }
        let n2 = dot_qq(&v, &v);
        star.push(v);
        norm2.push(n2);
        mu[i] = mus;
    }
    GramSchmidt { star, mu, norm2 }
}

/// Exact LLL reduction with delta = 99/100 of the given row basis, using
/// the all-integer formulation (incrementally maintained lambda and d).
/// Requires linearly independent rows; degenerate inputs fall back to a
/// slow rational-arithmetic variant.
pub fn lll_reduce(lattice: &IntegerLattice) -> IntegerLattice {
    let n = lattice.basis.len();
    if n <= 1 {
        return IntegerLattice::new(lattice.basis.clone());
    }
    match lll_integer(&lattice.basis) {
        Some(b) => IntegerLattice::new(b),
        None => IntegerLattice::new(lll_rational(&lattice.basis)),
    }
}

/// Integer LLL; returns None if the rows are linearly dependent.
fn lll_integer(basis: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let n = basis.len();
    let mut b: Vec<Vec<BigInt>> = basis.to_vec();
    // d[i] = Gram determinant of the first i+1 vectors; d_neg1 = 1
    let mut d: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut lam: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    let d_at = |d: &Vec<BigInt>, i: isize| -> BigInt {
        if i < 0 {
            BigInt::from(1)
        } else {
            d[i as usize].clone()
        }
    };
    d[0] = dot(&b[0], &b[0]);
    if d[0].is_zero() {
        return None;
    }
    let mut kmax = 0usize;
    let mut k = 1usize;
    let half_round = |num: &BigInt, den: &BigInt| -> BigInt {
        // round(num/den) with den > 0, half away from zero
        let two = BigInt::from(2);
        let sign = if num.is_negative() { -1 } else { 1 };
        (num * &two + den * BigInt::from(sign)) / (den * &two)
    };
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    let di = d_at(&d, i as isize);
                    let dim1 = d_at(&d, i as isize - 1);
                    u = (&di * &u - &lam[k][i] * &lam[j][i]) / &dim1;
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    d[k] = u;
                    if d[k].is_zero() {
                        return None;
                    }
                }
            }
        }
        loop {
            // RED(k, k-1)
            red_step(&mut b, &mut lam, &d, k, k - 1, &half_round);
            // Lovász with delta = 99/100:
            // 100 * d[k] * d[k-2] < 99 * d[k-1]^2 - 100 * lam[k][k-1]^2
            let dk = &d[k];
            let dkm1 = &d[k - 1];
            let dkm2 = d_at(&d, k as isize - 2);
            let lhs = BigInt::from(100) * dk * &dkm2;
            let rhs = BigInt::from(99) * dkm1 * dkm1
                - BigInt::from(100) * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                // SWAP(k)
                b.swap(k, k - 1);
                for j in 0..k.saturating_sub(1) {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let l = lam[k][k - 1].clone();
                let bb: BigInt = (&dkm2 * &d[k] + &l * &l) / &d[k - 1];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                    lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k];
                }
                d[k - 1] = bb;
                k = k.max(2) - 1;
            } else {
                break;
            }
        }
        for l in (0..k.saturating_sub(1)).rev() {
            red_step(&mut b, &mut lam, &d, k, l, &half_round);
        }
        k += 1;
    }
    Some(b)
}

fn red_step(
    b: &mut [Vec<BigInt>],
    lam: &mut [Vec<BigInt>],
    d: &[BigInt],
    k: usize,
    l: usize,
    half_round: &dyn Fn(&BigInt, &BigInt) -> BigInt,
) {
    let two_lam = BigInt::from(2) * lam[k][l].abs();
    if two_lam > d[l] {
        let q = half_round(&lam[k][l], &d[l]);
        if !q.is_zero() {
            for idx in 0..b[k].len() {
                let t = &b[l][idx] * &q;
                b[k][idx] -= t;
            }
            let t = &d[l] * &q;
            lam[k][l] -= t;
            for i in 0..l {
                let t = &lam[l][i] * &q;
                lam[k][i] -= t;
            }
        }
    }
}

/// Slow rational-arithmetic LLL for degenerate (dependent-row) inputs.
fn lll_rational(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut b = basis.to_vec();
    let n = b.len();
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let round_q = |q: &BigRational| -> BigInt {
        let two = BigInt::from(2);
        let sign = if q.numer().is_negative() { -1 } else { 1 };
        (q.numer() * &two + q.denom() * BigInt::from(sign)) / (q.denom() * &two)
    };
    let mut gs = gram_schmidt(&b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let m = gs.mu[k][j].clone();
            if m.abs() > half {
                let c = round_q(&m);
                if !c.is_zero() {
                    for idx in 0..b[k].len() {
                        let t = &b[j][idx] * &c;
                        b[k][idx] -= t;
                    }
                    gs = gram_schmidt(&b);
                }
            }
        }
        let lhs = gs.norm2[k].clone();
        let rhs = (&delta - &gs.mu[k][k - 1] * &gs.mu[k][k - 1]) * &gs.norm2[k - 1];
        if lhs >= rhs || gs.norm2[k - 1].is_zero() {
            k += 1;
        } else {
            b.swap(k, k - 1);
            gs = gram_schmidt(&b);
            k = k.max(2) - 1;
            if k == 0 {
                k = 1;
            }
        }
    }
    let _ = &gs.star;
    b
}

// ---------------------------------------------------------------------------
// Integer relations
// ---------------------------------------------------------------------------

fn float_to_scaled_int(x: &Float, scale_digits: u32) -> BigInt {
    let scaled = x * Float::with_val(x.prec(), 10).pow(scale_digits);
    let z = scaled.to_integer().unwrap_or_default();
    BigInt::parse_bytes(z.to_string_radix(10).as_bytes(), 10).unwrap_or_default()
}

/// Search for a small integer vector v with sum v_i * x_i ~ 0, using the
/// classical LLL embedding with scale 10^(digits - guard).
///
/// `digits` is the number of reliable decimal digits in the inputs. Returns
/// `Ok(None)` if no convincing relation exists at this precision.
pub fn integer_relation(
    xs: &[Float],
    digits: u32,
) -> Result<Option<Vec<BigInt>>, RecognizeError> {
    if digits < 20 {
        return Err(RecognizeError::PrecisionTooLow(digits));
    }
    if xs.is_empty() {
        return Err(RecognizeError::EmptyInput);
    }
    let n = xs.len();
    let guard = 10u32.min(digits / 4);
    let scale_digits = digits - guard;
    // rows: [e_i | round(x_i * 10^scale)]
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (i, x) in xs.iter().enumerate() {
        let mut row = vec![BigInt::zero(); n + 1];
        row[i] = BigInt::from(1);
        row[n] = float_to_scaled_int(x, scale_digits);
        rows.push(row);
    }
    let red = lll_reduce(&IntegerLattice::new(rows));
    // acceptance threshold on the actual relation value
    let prec = xs[0].prec();
    let thresh = Float::with_val(prec, 10).pow(digits.saturating_sub(10)).recip();
    let mut best: Option<(Float, Vec<BigInt>)> = None;
    for row in &red.basis {
        let v = &row[..n];
        if v.iter().all(|c| c.is_zero()) {
            continue;
        }
        let mut s = Float::with_val(prec, 0);
        for (c, x) in v.iter().zip(xs) {
            let c_f = Float::with_val(prec, rug::Integer::from_str_radix(&c.to_string(), 10).unwrap());
            s += c_f * x;
        }
        let a = s.clone().abs();
        if a < thresh {
            let better = match &best {
                None => true,
                Some((b, _)) => a < *b,
            };
            if better {
                best = Some((a, v.to_vec()));
            }
        }
    }
    Ok(best.map(|(_, mut v)| {
        // normalize sign: first nonzero entry positive
        if let Some(first) = v.iter().find(|c| !c.is_zero()) {
            if first.is_negative() {
                for c in &mut v {
                    *c = -c.clone();
                }
            }
        }
        v
    }))
}

// ---------------------------------------------------------------------------
// Algebraic dependence
// ---------------------------------------------------------------------------

/// Find the minimal polynomial (degree <= max_degree) of x, if any, by
/// running integer relation detection on the powers 1, x, ..., x^d for
/// increasing d. Returns a primitive polynomial with positive leading
/// coefficient, or None.
pub fn algdep(x: &Float, max_degree: u32, digits: u32) -> Result<Option<ZPoly>, RecognizeError> {
    if digits < 20 {
        return Err(RecognizeError::PrecisionTooLow(digits));
    }
    let prec = x.prec();
    for d in 1..=max_degree {
        let mut pows = Vec::with_capacity(d as usize + 1);
        let mut p = Float::with_val(prec, 1);
        pows.push(p.clone());
        for _ in 0..d {
            p = (&p * x).complete(prec);
            pows.push(p.clone());
        }
        if let Some(rel) = integer_relation(&pows, digits)? {
            let poly = ZPoly::new(rel);
            if poly.degree() < 1 {
                continue;
            }
            // verify: |p(x)| must be tiny relative to coefficient size
            let mut val = Float::with_val(prec, 0);
            for (i, c) in poly.coeffs.iter().enumerate() {
                let c_f = Float::with_val(prec, rug::Integer::from_str_radix(&c.to_string(), 10).unwrap());
                val += c_f * Float::with_val(prec, x).pow(i as u32);
            }
            let height: f64 = poly
                .coeffs.iter()
                .map(|c| c.abs().to_f64().unwrap_or(f64::MAX))
                .fold(1.0f64, f64::max);
            // Information budget: a candidate of degree d and height h is
            // specified by about (d+1) log10 h digits; unless that is well
            // below the available precision, a fit this good can arise by
            // chance from the lattice search alone.
            let spec_digits = (d as f64 + 1.0) * height.log10();
            if spec_digits > digits as f64 - 15.0 {
                continue;
            }
            let thresh = Float::with_val(prec, 10)
                .pow(digits.saturating_sub(10))
                .recip()
                * Float::with_val(prec, height);
            if val.abs() < thresh {
                let poly = poly.normalized();
                // prefer the squarefree part if it still vanishes at x
                return Ok(Some(poly));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Log value recognition
// ---------------------------------------------------------------------------

/// The rational scales r tried, in deterministic order.
fn scale_candidates() -> Vec<BigRational> {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    vec![
        q(1, 1),
        q(1, 2),
        q(-1, 2),
        q(2, 1),
        q(-2, 1),
        q(1, 3),
        q(-1, 3),
        q(3, 1),
        q(-3, 1),
        q(1, 4),
        q(-1, 4),
        q(1, 6),
        q(-1, 6),
        q(12, 1),
        q(-12, 1),
        q(24, 1),
        q(-24, 1),
    ]
}

fn rational_to_big_float(q: &BigRational, prec: u32) -> Float {
    let n = rug::Integer::from_str_radix(&q.numer().to_string(), 10).unwrap();
    let d = rug::Integer::from_str_radix(&q.denom().to_string(), 10).unwrap();
    Float::with_val(prec, n) / Float::with_val(prec, d)
}

/// Refine a root of p near x0 by Newton iteration at the given precision.
fn newton_refine(p: &ZPoly, x0: &Float, prec: u32) -> Float {
    let dp = p.derivative();
    let eval = |q: &ZPoly, x: &Float| -> Float {
        let mut acc = Float::with_val(prec, 0);
        for c in q.coeffs.iter().rev() {
            let c_f = Float::with_val(prec, rug::Integer::from_str_radix(&c.to_string(), 10).unwrap());
            acc = acc * x + c_f;
        }
        acc
    };
    let mut x = Float::with_val(prec, x0);
    for _ in 0..prec.ilog2() + 10 {
        let f = eval(p, &x);
        let fp = eval(&dp, &x);
        if fp.is_zero() {
            break;
        }
        let step = f / fp;
        if step.clone().abs() < Float::with_val(prec, 2).pow(prec - 4).recip() {
            x -= step;
            break;
        }
        x -= step;
    }
    x
}

/// Try to recognize w as r * ln(alpha) with alpha algebraic of degree at
/// most `max_degree` and coefficient height about 10^(digits/2) or less.
///
/// `digits` is the number of reliable decimal digits in w. The verification
/// recomputes ln(alpha) from the exact minimal polynomial at 1.5x precision.
pub fn recognize_log_value(
    w: &Float,
    max_degree: u32,
    digits: u32,
) -> Result<RecognitionReport, RecognizeError> {
    if digits < 20 {
        return Err(RecognizeError::PrecisionTooLow(digits));
    }
    let prec = w.prec();
    let hi_prec = prec + prec / 2;
    let noise_floor = 10f64.powi(-(digits.saturating_sub(10) as i32));
    let inconclusive = |conf: f64| RecognitionReport {
        status: RecognitionStatus::Inconclusive,
        candidate: None,
        search_parameters: (digits, max_degree, 50),
        confidence: conf,
    };
    if w.clone().abs() < Float::with_val(prec, 10).pow(digits / 2).recip() {
        // too close to zero to say anything
        return Ok(inconclusive(1.0));
    }
    for r in scale_candidates() {
        let r_f = rational_to_big_float(&r, prec);
        let arg = (w / &r_f).complete(prec);
        let alpha_hat = arg.clone().exp();
        if !alpha_hat.is_finite() || alpha_hat.clone().abs() > Float::with_val(prec, 1e30) {
            continue;
        }
        let Some(poly) = algdep(&alpha_hat, max_degree, digits)? else {
            continue;
        };
        // refine the root at higher precision and re-evaluate the log
        let alpha_hi = newton_refine(&poly, &Float::with_val(hi_prec, &alpha_hat), hi_prec);
        if alpha_hi <= 0 {
            continue;
        }
        let ln_hi = alpha_hi.clone().ln();
        let r_hi = rational_to_big_float(&r, hi_prec);
        let w_hi = Float::with_val(hi_prec, w);
        let resid = (w_hi - r_hi * ln_hi).abs().to_f64();
        let confidence = resid / noise_floor;
        if confidence < 1e-5 {
            return Ok(RecognitionReport {
                status: RecognitionStatus::Recognized,
                candidate: Some(LogRepresentation {
                    r,
                    alpha_minpoly: poly,
                    alpha_approx: alpha_hat.to_f64(),
                    residual: resid,
                }),
                search_parameters: (digits, max_degree, 50),
                confidence,
            });
        }
    }
    Ok(inconclusive(1.0))
}
