//! Numerical core for the Green's function lattice sums.
//!
//! The sum G(tau, sigma) = -2 sum_{gamma in Gamma_0} Q_1(u(tau, gamma sigma))
//! is organized by Gamma_infinity-cosets, i.e. by bottom rows +-(c, d) with
//! gcd(c, d) = 1 and N | c. Within a coset the translation sum over
//! gamma sigma + k is evaluated through the expansion
//! Q_1(t) = sum_{j>=1} t^(-2j)/(2j+1) and the lattice sums
//! T_m(X, C) = sum_k ((X-k)^2 + C^2)^(-m), computed by Poisson summation:
//!
//!   T_m(X, C) = A_m C^(1-2m) + 2 sum_{n>=1} cos(2 pi n X) F_m(n, C),
//!   F_m(n, C) = 2 pi e^(-2 pi n C)
//!               sum_{l=0}^{m-1} w_{m,l} (2C)^(-m-l) (2 pi n)^(m-1-l),
//!   w_{m,l}   = binom(m-1, l) (m+l-1)! / ((m-1)!)^2,
//!
//! obtained from the order-m residue of e^(ibt)/(t^2+C^2)^m at t = iC. All
//! terms are positive, so the evaluation is stable for every C (unlike the
//! cotangent-derivative form, whose intermediate terms grow like e^(2 pi C m)).
//!
//! Zero Fourier modes of distant cosets (Q = |c sigma + d|^2 > QSWITCH) are
//! resummed exactly to Q = infinity with Epstein-style sums
//! Z_s = sum_cosets Q^(-s); the enumeration up to the cutoff qmax adds only
//! their oscillatory parts (size ~ e^(-2 pi y_t)) in f64. The oscillatory
//! remainder beyond qmax enters the error bound through a heuristic that the
//! two-cutoff test suite validates empirically.

use num_integer::Integer;
use rug::ops::{CompleteRound, Pow};
use rug::Float;

use crate::modgroup::{ext_gcd, PointH};

use super::GreenError;

/// Direct-window threshold: translates with u <= U0 are summed with the
/// exact Q_1 and removed from the power-sum series, so the series converges
/// geometrically with ratio U0^(-2).
const U0: f64 = 8.0;
/// Cosets with Q below this are evaluated fully in rug; beyond it only the
/// oscillatory part is accumulated (in f64) and the zero mode comes from the
/// exact Epstein resummation.
const QSWITCH: f64 = 64.0;
/// Number of 1/Q^2 powers kept in the zero-mode tail expansion.
const ETA_TERMS: usize = 6;
/// Extra bits beyond 2x the requested precision (the window subtraction
/// T_{2j} - sum_window P_k^(-2j) can lose up to ~prec bits when u_min is
/// close to 1, hence the doubling).
const GUARD_BITS: u32 = 96;

/// Legendre function of the second kind, Q_1(t) = (t/2) ln((t+1)/(t-1)) - 1.
pub fn legendre_q1(t: &Float) -> Result<Float, GreenError> {
    if !(t.clone() > 1f64) {
        return Err(GreenError::Domain(format!("legendre_q1 requires t > 1, got {}", t)));
    }
    let prec = t.prec();
    let num = (t + 1u32).complete(prec);
    let den = (t - 1u32).complete(prec);
    Ok(t.clone() / 2u32 * (num / den).ln() - 1u32)
}

// ---------------------------------------------------------------------------
// Translation sums T_m via Poisson summation
// ---------------------------------------------------------------------------

/// Cached residue weights w_{m,l} and zero-mode constants A_m.
pub(crate) struct FourierWeights {
    pub prec: u32,
    pi: Float,
    /// w[m-1][l] = binom(m-1, l) (m+l-1)! / ((m-1)!)^2, l = 0..m-1
    w: Vec<Vec<Float>>,
    /// a[m-1] = A_m = sqrt(pi) Gamma(m - 1/2) / Gamma(m)
    a: Vec<Float>,
}

impl FourierWeights {
    pub fn new(prec: u32) -> Self {
        FourierWeights {
            prec,
            pi: Float::with_val(prec, rug::float::Constant::Pi),
            w: vec![],
            a: vec![],
        }
    }

    fn ensure(&mut self, m_max: usize) {
        while self.w.len() < m_max {
            let m = self.w.len() + 1;
            let mut row = Vec::with_capacity(m);
            // w_{m,0} = (m-1)!/((m-1)!)^2 = 1/(m-1)!
            let mut fact = Float::with_val(self.prec, 1);
            for t in 1..m {
                fact *= Float::with_val(self.prec, t as u64);
            }
            let mut cur = fact.recip();
            row.push(cur.clone());
            for l in 0..m - 1 {
                // w_{m,l+1} = w_{m,l} * (m-1-l) (m+l) / (l+1)
                cur *= Float::with_val(self.prec, ((m - 1 - l) * (m + l)) as u64);
                cur /= Float::with_val(self.prec, (l + 1) as u64);
                row.push(cur.clone());
            }
            self.w.push(row);
            // A_m = pi binom(2m-2, m-1) 2^(2-2m)
            let mut b = Float::with_val(self.prec, 1);
            for t in 0..m - 1 {
                b *= Float::with_val(self.prec, (2 * m - 2 - t) as u64);
                b /= Float::with_val(self.prec, (t + 1) as u64);
            }
            self.a
                .push(self.pi.clone() * b * Float::with_val(self.prec, 2f64).pow(2i32 - 2 * m as i32));
        }
    }
}

/// T_m(X, C) = sum_{k in Z} ((X-k)^2 + C^2)^(-m), m = 1..=m_max, to full
/// working precision (relative to each T_m).
pub(crate) fn t_sums(x: &Float, c_val: &Float, m_max: usize, fw: &mut FourierWeights) -> Vec<Float> {
    fw.ensure(m_max);
    let prec = fw.prec;
    let pi = fw.pi.clone();
    // zero modes A_m C^(1-2m)
    let cinv = c_val.clone().recip();
    let mut out: Vec<Float> = Vec::with_capacity(m_max);
    {
        let c2inv = cinv.clone().square();
        let mut cp = cinv.clone(); // C^(1-2m)
        for m in 1..=m_max {
            out.push(fw.a[m - 1].clone() * &cp);
            let _ = m;
            cp *= &c2inv;
        }
    }
    // oscillatory terms
    let theta = (Float::with_val(prec, 2) * &pi) * (x.clone() - x.clone().round());
    let cos1 = theta.clone().cos();
    let two_cos1 = cos1.clone() * 2u32;
    let q = (-(Float::with_val(prec, 2) * &pi) * c_val).exp();
    if q.is_zero() {
        return out;
    }
    // inverse powers of 2C: inv2c[t] = (2C)^(-t-1), t = 0..2m_max-2
    let inv2c1 = (Float::with_val(prec, 2) * c_val).recip();
    let mut inv2c = Vec::with_capacity(2 * m_max - 1);
    let mut cur = inv2c1.clone();
    for _ in 0..2 * m_max - 1 {
        inv2c.push(cur.clone());
        cur *= &inv2c1;
    }
    let two_pi = Float::with_val(prec, 2) * &pi;
    // threshold: stop once relative contributions are below 2^-(prec+4)
    let thresh = Float::with_val(prec, 2f64).pow(-(prec as i32 + 4));
    // n must also pass the growth peak of (2 pi n)^(m-1) e^(-2 pi n C)
    let n_grow = ((m_max as f64) / (2.0 * std::f64::consts::PI * c_val.to_f64().max(1e-6)))
        .ceil() as u64
        + 1;
    let mut enp = Float::with_val(prec, 1); // e^(-2 pi n C)
    let mut cos_nm1 = Float::with_val(prec, 1); // cos(2 pi (n-1) X)
    let mut cos_n = cos1.clone(); // cos(2 pi n X)
    let mut n: u64 = 1;
    loop {
        enp *= &q;
        // powers (2 pi n)^t, t = 0..m_max-1
        let b = two_pi.clone() * Float::with_val(prec, n);
        let mut bp = Vec::with_capacity(m_max);
        let mut curb = Float::with_val(prec, 1);
        for _ in 0..m_max {
            bp.push(curb.clone());
            curb *= &b;
        }
        let mut max_rel = Float::with_val(prec, 0);
        for m in 1..=m_max {
            let mut s = Float::with_val(prec, 0);
            for l in 0..m {
                s += fw.w[m - 1][l].clone() * &inv2c[m + l - 1] * &bp[m - 1 - l];
            }
            let fhat = two_pi.clone() * &enp * s;
            let contrib = (cos_n.clone() * 2u32) * &fhat;
            // track the largest envelope (|cos| <= 1) relative to T_m so far
            let rel = fhat.clone() * 2u32 / out[m - 1].clone().abs();
            if rel > max_rel {
                max_rel = rel;
            }
            out[m - 1] += contrib;
        }
        if n >= n_grow && max_rel < thresh {
            break;
        }
        // Chebyshev recurrence for cos(2 pi n X)
        let next = two_cos1.clone() * &cos_n - &cos_nm1;
        cos_nm1 = cos_n;
        cos_n = next;
        n += 1;
        if n > 4_000_000 {
            break; // unreachable in practice; C is bounded below
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Per-coset evaluation: exact (rug) path
// ---------------------------------------------------------------------------

pub(crate) struct CosetOut {
    pub value: Float,
    pub bound: Float,
    pub terms: u64,
}

/// Sum of Q_1(u_k) over the translation orbit u_k = ((X-k)^2 + C^2)/B.
pub(crate) fn coset_sum_exact(
    x: &Float,
    csq: &Float,
    b: &Float,
    pole_eps: &Float,
    eps_term: &Float,
    fw: &mut FourierWeights,
) -> Result<CosetOut, GreenError> {
    let prec = fw.prec;
    let d0 = x.clone() - x.clone().round();
    let u_min = (d0.clone().square() + csq) / b.clone();
    if u_min < (1f64 + pole_eps.clone()) {
        return Err(GreenError::PoleHit);
    }
    let mut value = Float::with_val(prec, 0);
    let mut terms: u64 = 0;
    // direct window: u_k <= U0, i.e. (X-k)^2 <= U0*B - C^2
    let w2 = Float::with_val(prec, U0) * b - csq;
    let mut window: Vec<Float> = vec![]; // the P_k = (X-k)^2 + C^2 values
    if w2 > 0 {
        let w = w2.sqrt();
        let k_lo = (x.clone() - &w).ceil().to_f64() as i64;
        let k_hi = (x.clone() + &w).floor().to_f64() as i64;
        for k in k_lo..=k_hi {
            let p = (x.clone() - Float::with_val(prec, k)).square() + csq;
            let u = p.clone() / b.clone();
            if u < (1f64 + pole_eps.clone()) {
                return Err(GreenError::PoleHit);
            }
            value += legendre_q1(&u)?;
            window.push(p);
            terms += 1;
        }
    }
    // series part: sum_j B^(2j)/(2j+1) * [T_{2j} - sum_window P_k^(-2j)]
    let c_val = csq.clone().sqrt();
    let win_inv2: Vec<Float> = window.iter().map(|p| p.clone().square().recip()).collect();
    let mut win_cur: Vec<Float> = win_inv2.clone();
    let b2 = b.clone().square();
    let mut bpow = b2.clone();
    let mut bound = Float::with_val(prec, 0);
    // Estimate the series depth upfront so T_m is computed once: terms decay
    // like u_out^(-2j) where u_out is the smallest u outside the window.
    let u_out = if window.is_empty() {
        u_min.to_f64()
    } else {
        U0
    }
    .max(U0);
    let eps_ln = -eps_term.to_f64().max(1e-300).ln();
    let head = c_val.to_f64().max(1.0).ln() + 2.0;
    let j_cap = ((((eps_ln + head) / (2.0 * u_out.ln())).ceil() as usize) + 2).clamp(2, 120);
    let t_cache = t_sums(x, &c_val, 2 * j_cap, fw);
    for j in 1..=j_cap {
        let mut s = t_cache[2 * j - 1].clone();
        for wv in &win_cur {
            s -= wv;
        }
        let term = bpow.clone() * s / Float::with_val(prec, (2 * j + 1) as u32);
        value += &term;
        terms += 1;
        let tmag = term.abs();
        if tmag < *eps_term || j == j_cap {
            // remaining terms decay at least geometrically with ratio U0^-2
            bound += tmag * Float::with_val(prec, 1.0 / (U0 * U0 - 1.0));
            break;
        }
        bpow *= &b2;
        for (cur, i2) in win_cur.iter_mut().zip(win_inv2.iter()) {
            *cur *= i2;
        }
    }
    Ok(CosetOut { value, bound, terms })
}

// ---------------------------------------------------------------------------
// f64 path for distant cosets (Q > QSWITCH: u_min is large, no window)
// ---------------------------------------------------------------------------

const F64_IMAX: usize = 8; // largest m = 2j used in the f64 series

/// f64 residue weights (exact small integers).
fn f64_weights() -> [[f64; F64_IMAX]; F64_IMAX] {
    let mut w = [[0.0; F64_IMAX]; F64_IMAX];
    for m in 1..=F64_IMAX {
        let mut fact = 1.0;
        for t in 1..m {
            fact *= t as f64;
        }
        w[m - 1][0] = 1.0 / fact; // w_{m,0} = 1/(m-1)!
        for l in 0..m - 1 {
            w[m - 1][l + 1] = w[m - 1][l] * ((m - 1 - l) * (m + l)) as f64 / (l + 1) as f64;
        }
    }
    w
}

/// Zero-mode constants A_m in f64.
#[cfg_attr(not(test), allow(dead_code))]
fn f64_amodes() -> [f64; F64_IMAX] {
    let pi = std::f64::consts::PI;
    let mut a = [0.0; F64_IMAX];
    for m in 1..=F64_IMAX {
        let mut b = 1.0;
        for t in 0..m - 1 {
            b *= (2 * m - 2 - t) as f64 / (t + 1) as f64;
        }
        a[m - 1] = pi * b * 2f64.powi(2 - 2 * m as i32);
    }
    a
}

/// Oscillatory part (n >= 1 Fourier modes) of the coset Q_1-sum, f64.
/// Valid when u_min = C^2/B is large (far cosets), where the j-series
/// converges in a few terms.
pub(crate) fn coset_osc_f64(x: f64, csq: f64, b: f64, w: &[[f64; F64_IMAX]; F64_IMAX]) -> f64 {
    let pi = std::f64::consts::PI;
    let c_val = csq.sqrt();
    let q = (-2.0 * pi * c_val).exp();
    if q < 1e-300 {
        return 0.0;
    }
    let inv2c = 1.0 / (2.0 * c_val);
    let theta = 2.0 * pi * (x - x.round());
    let b2 = b * b;
    // T_m oscillatory values, m = 1..F64_IMAX, built per n
    let mut t_osc = [0.0f64; F64_IMAX];
    let cos1 = theta.cos();
    let mut cos_nm1 = 1.0f64;
    let mut cos_n = cos1;
    let mut enp = 1.0f64;
    let mut first_max = 0.0f64;
    for _n in 1..=64u64 {
        enp *= q;
        let bb = 2.0 * pi * _n as f64;
        let mut max_f = 0.0f64;
        for m in 1..=F64_IMAX {
            let mut s = 0.0;
            let mut p2c = inv2c.powi(m as i32); // (2C)^(-m-l)
            let mut bp = bb.powi(m as i32 - 1); // (2 pi n)^(m-1-l)
            for l in 0..m {
                s += w[m - 1][l] * p2c * bp;
                p2c *= inv2c;
                bp /= bb;
            }
            let fhat = 2.0 * pi * enp * s;
            t_osc[m - 1] += 2.0 * cos_n * fhat;
            if fhat > max_f {
                max_f = fhat;
            }
        }
        if _n == 1 {
            first_max = max_f;
        }
        // terms decay by a factor of at least q per mode; f64 cannot resolve
        // contributions 1e-18 below the leading one
        if max_f < first_max * 1e-18 + 1e-300 {
            break;
        }
        let next = 2.0 * cos1 * cos_n - cos_nm1;
        cos_nm1 = cos_n;
        cos_n = next;
    }
    let mut total = 0.0;
    let mut bpow = b2;
    for j in 1..=F64_IMAX / 2 {
        let term = bpow * t_osc[2 * j - 1] / (2 * j + 1) as f64;
        total += term;
        bpow *= b2;
    }
    total
}

/// Full f64 coset sum (zero mode + oscillatory), for cross-checks against
/// the exact path. Far-coset regime only (empty window).
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn coset_sum_f64(x: f64, csq: f64, b: f64) -> f64 {
    let w = f64_weights();
    let a = f64_amodes();
    let c_val = csq.sqrt();
    let mut zero = 0.0;
    let b2 = b * b;
    let mut bpow = b2;
    for j in 1..=F64_IMAX / 2 {
        let m = 2 * j;
        zero += bpow * a[m - 1] * c_val.powi(1 - 2 * m as i32) / (2 * j + 1) as f64;
        bpow *= b2;
    }
    zero + coset_osc_f64(x, csq, b, &w)
}

// ---------------------------------------------------------------------------
// Zero-mode tail: eta expansion and Epstein sums
// ---------------------------------------------------------------------------

/// Zero Fourier mode of T_m: integral over X, pi binom(2m-2, m-1) 2^(2-2m) C^(1-2m).
fn t_hat_coef(m: usize, prec: u32) -> Float {
    let mut b = Float::with_val(prec, 1);
    for t in 0..m - 1 {
        b *= Float::with_val(prec, (2 * m - 2 - t) as u64);
        b /= Float::with_val(prec, (t + 1) as u64);
    }
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    pi * b * Float::with_val(prec, 2f64).pow(2i32 - 2 * m as i32)
}

/// Coefficients eta_i (i = 1..=imax) of the X-averaged coset sum
/// S_hat(Q) = sum_i eta_i Q^(-2i), where B = 2 y_t y_s / Q and
/// C^2 = y_t^2 + y_s^2/Q^2.
pub(crate) fn eta_coeffs(y_t: &Float, y_s: &Float, imax: usize, prec: u32) -> Vec<Float> {
    let mut eta = vec![Float::with_val(prec, 0); imax + 1];
    let r = (y_s.clone() / y_t.clone()).square(); // (y_s/y_t)^2
    let byy = Float::with_val(prec, 2) * y_t * y_s;
    for j in 1..=imax {
        // B^{2j}/(2j+1) * T_hat_{2j}(C); C^{1-4j} = y_t^{1-4j} (1 + r q^2)^{(1-4j)/2}
        let base = byy.clone().pow(2 * j as u32) / Float::with_val(prec, (2 * j + 1) as u32)
            * t_hat_coef(2 * j, prec)
            * y_t.clone().pow(1i32 - 4 * j as i32);
        // binomial series (1 + r q^2)^alpha, alpha = (1-4j)/2
        let alpha = Float::with_val(prec, 1i64 - 4 * j as i64) / 2u32;
        let mut coef = Float::with_val(prec, 1);
        for p in 0..=(imax - j) {
            if p > 0 {
                coef *= (alpha.clone() - Float::with_val(prec, p as u32 - 1)) * &r
                    / Float::with_val(prec, p as u32);
            }
            eta[j + p] += base.clone() * &coef;
        }
    }
    eta
}

fn moebius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// M_s(m) = sum_{j>=1} T_s(j m x_s, j m y_s), exact for j m y_s below the
/// working scale and with the zero-mode zeta tail beyond.
fn m_sum(
    s: usize,
    modulus: u64,
    x_s: &Float,
    y_s: &Float,
    prec: u32,
    fw: &mut FourierWeights,
) -> Float {
    let digits = prec as f64 * 0.302;
    let l_big = (digits * std::f64::consts::LN_10 / (2.0 * std::f64::consts::PI) + 4.0).max(8.0);
    let m_f = modulus as f64;
    let ys_f = y_s.to_f64();
    let j_max = ((l_big / (m_f * ys_f)).ceil() as u64).max(1);
    let mut total = Float::with_val(prec, 0);
    let mut partial_zeta = Float::with_val(prec, 0);
    for j in 1..=j_max {
        let cx = Float::with_val(prec, j * modulus) * x_s;
        let cy = Float::with_val(prec, j * modulus) * y_s;
        total += t_sums(&cx, &cy, s, fw).pop().unwrap();
        partial_zeta += Float::with_val(prec, j).pow(1i32 - 2 * s as i32);
    }
    // tail: coef * (m y_s)^(1-2s) * (zeta(2s-1) - partial)
    let zeta = Float::with_val(prec, (2 * s - 1) as u32).zeta();
    let coef = t_hat_coef(s, prec);
    total +=
        coef * (Float::with_val(prec, modulus) * y_s).pow(1i32 - 2 * s as i32) * (zeta - partial_zeta);
    total
}

/// Z_s = sum over Gamma_infinity-cosets of Gamma_0(N) of Q^(-s), where
/// Q = |c sigma + d|^2 over bottom rows +-(c,d), gcd 1, N | c (c = 0 gives
/// the single coset with Q = 1).
pub(crate) fn z_epstein(
    level: u64,
    x_s: &Float,
    y_s: &Float,
    s: usize,
    prec: u32,
    fw: &mut FourierWeights,
) -> Float {
    let n = level.max(1);
    // prefactor: (1/zeta(2s)) * prod_{p | N} (1 - p^(-2s))^(-1)
    let mut pref = Float::with_val(prec, (2 * s) as u32).zeta().recip();
    for p in prime_divisors(n) {
        let t = Float::with_val(prec, 1) - Float::with_val(prec, p).pow(-(2 * s as i32));
        pref /= t;
    }
    let mut total = Float::with_val(prec, 1); // the c = 0 coset
    // sum over squarefree divisors g of N
    let mut g = 1u64;
    while g <= n {
        if n % g == 0 {
            let mu = moebius(g);
            if mu != 0 {
                let a_g = Float::with_val(prec, mu)
                    * Float::with_val(prec, g).pow(-(2 * s as i32))
                    * &pref;
                let m = m_sum(s, n / g, x_s, y_s, prec, fw);
                total += a_g * m;
            }
        }
        g += 1;
    }
    total
}

// ---------------------------------------------------------------------------
// Main coset enumeration
// ---------------------------------------------------------------------------

pub(crate) struct RawSum {
    /// sum over Gamma_0 of Q_1(u); multiply by -2 for G
    pub sum: Float,
    pub bound: Float,
    pub terms: u64,
}

struct Kahan {
    s: f64,
    c: f64,
}

impl Kahan {
    fn new() -> Self {
        Kahan { s: 0.0, c: 0.0 }
    }
    fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.s + y;
        self.c = (t - self.s) - y;
        self.s = t;
    }
}

/// Heuristic magnitude of the neglected oscillatory (nonzero Fourier mode)
/// tail beyond Q > qmax, with a safety factor of 10. Validated empirically
/// by the two-cutoff test suite.
pub(crate) fn oscillatory_bound(y_t: f64, y_s: f64, qmax: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let kappa =
        4.0 * pi * y_s * y_s * (1.0 + 2.0 * pi * y_t * 1.5) * (-2.0 * pi * y_t).exp() / (3.0 * y_t);
    10.0 * kappa * qmax.powf(-1.5) / y_s.sqrt().max(1e-6)
}

/// Choose the coset cutoff Q_max so the heuristic oscillatory tail is below
/// target/3, clamped to a feasible range.
pub(crate) fn choose_qmax(y_t: f64, y_s: f64, target: f64) -> f64 {
    let mut lo = 2.0e3;
    let hi = 4.0e8;
    while lo < hi && oscillatory_bound(y_t, y_s, lo) > target / 3.0 {
        lo *= 1.5;
    }
    lo.min(hi)
}

/// Core sum for Gamma_0(level) at base coordinates: tau, sigma reduced by
/// the caller. Returns sum of Q_1 over the whole group, with error bound.
pub(crate) fn gamma0_q1_sum(
    level: u64,
    tau: &PointH,
    sigma: &PointH,
    qmax: f64,
    prec: u32,
) -> Result<RawSum, GreenError> {
    // double precision absorbs the window-subtraction cancellation
    let wp = 2 * prec + GUARD_BITS;
    // order so y_t >= y_s (the sum is symmetric; larger y_t improves the
    // oscillatory tail)
    let (t, s) = if tau.y >= sigma.y { (tau, sigma) } else { (sigma, tau) };
    let (xt, yt) = (Float::with_val(wp, &t.x), Float::with_val(wp, &t.y));
    let (xs, ys) = (Float::with_val(wp, &s.x), Float::with_val(wp, &s.y));
    let (xt_f, yt_f) = (xt.to_f64(), yt.to_f64());
    let (xs_f, ys_f) = (xs.to_f64(), ys.to_f64());
    let n = level.max(1) as i64;
    let digits = (prec as f64) * 0.302;
    let pole_eps = Float::with_val(wp, 10f64).pow(-(digits / 2.0).floor());
    let eps_term = Float::with_val(wp, 2f64).pow(-(prec as i32 + 48));
    let mut fw = FourierWeights::new(wp);
    let w64 = f64_weights();
    let mut exact_sum = Float::with_val(wp, 0);
    let mut exact_bound = Float::with_val(wp, 0);
    let mut osc = Kahan::new();
    let mut osc_abs = Kahan::new();
    let mut terms: u64 = 0;
    // sum of Q^(-2i) over the exactly-evaluated cosets, i = 1..ETA_TERMS
    let mut powq = vec![Float::with_val(wp, 0); ETA_TERMS];

    // c = 0 coset: w = sigma, Q = 1
    {
        let x = xt.clone() - &xs;
        let b = (Float::with_val(wp, 2) * &yt) * &ys;
        let csq = yt.clone().square() + ys.clone().square();
        let out = coset_sum_exact(&x, &csq, &b, &pole_eps, &eps_term, &mut fw)?;
        exact_sum += out.value;
        exact_bound += out.bound;
        terms += out.terms;
        for k in powq.iter_mut() {
            *k += 1u32;
        }
    }
    // c > 0, N | c
    let c_max = (qmax.sqrt() / ys_f).floor() as i64;
    let mut c = n;
    while c <= c_max {
        let cf = c as f64;
        let rad2 = qmax - cf * ys_f * cf * ys_f;
        if rad2 >= 0.0 {
            let rad = rad2.sqrt();
            let d_lo = (-cf * xs_f - rad).floor() as i64;
            let d_hi = (-cf * xs_f + rad).ceil() as i64;
            for d in d_lo..=d_hi {
                if c.gcd(&d) != 1 {
                    continue;
                }
                let lin = cf * xs_f + d as f64;
                let q_f = lin * lin + cf * ys_f * cf * ys_f;
                if q_f > qmax {
                    continue;
                }
                // a0 = d^{-1} mod c
                let (_, a0, _) = ext_gcd(d, c);
                let xw_f = a0 as f64 / cf - lin / (cf * q_f);
                let x_f = xt_f - xw_f;
                let yw_f = ys_f / q_f;
                let b_f = 2.0 * yt_f * yw_f;
                let csq_f = yt_f * yt_f + yw_f * yw_f;
                if q_f > QSWITCH {
                    // zero mode handled by the Epstein resummation; only the
                    // oscillatory part is accumulated here
                    let v = coset_osc_f64(x_f, csq_f, b_f, &w64);
                    osc.add(v);
                    osc_abs.add(v.abs());
                    terms += 1;
                } else {
                    // full-precision geometry
                    let lin_w = (Float::with_val(wp, c) * &xs) + Float::with_val(wp, d);
                    let q_w = lin_w.clone().square() + (Float::with_val(wp, c) * &ys).square();
                    let xw = Float::with_val(wp, a0) / Float::with_val(wp, c)
                        - lin_w / (Float::with_val(wp, c) * &q_w);
                    let x = xt.clone() - xw;
                    let yw = ys.clone() / &q_w;
                    let b = (Float::with_val(wp, 2) * &yt) * &yw;
                    let csq = yt.clone().square() + yw.square();
                    let out = coset_sum_exact(&x, &csq, &b, &pole_eps, &eps_term, &mut fw)?;
                    exact_sum += out.value;
                    exact_bound += out.bound;
                    terms += out.terms;
                    let qi2 = q_w.clone().square().recip();
                    let mut qp = qi2.clone();
                    for k in powq.iter_mut() {
                        *k += &qp;
                        qp *= &qi2;
                    }
                }
            }
        }
        c += n;
    }
    // zero-mode resummation over all cosets beyond the exact set
    let eta = eta_coeffs(&yt, &ys, ETA_TERMS, wp);
    let mut tail = Float::with_val(wp, 0);
    let mut last_mag = Float::with_val(wp, 0);
    for i in 1..=ETA_TERMS {
        let z = z_epstein(level, &xs, &ys, 2 * i, wp, &mut fw);
        let rem = z - &powq[i - 1];
        let contrib = eta[i].clone() * rem;
        last_mag = contrib.clone().abs();
        tail += contrib;
    }
    // slack for the truncated eta series (next term is smaller than the last
    // kept one by ~QSWITCH^-2)
    let mut bound = exact_bound + last_mag;
    // oscillatory heuristic beyond qmax
    bound += Float::with_val(wp, oscillatory_bound(yt_f, ys_f, qmax));
    // f64 noise in the oscillatory accumulation
    bound += Float::with_val(wp, 1e-14 * (osc_abs.s + osc_abs.c) + 1e-16 * tail.to_f64().abs());
    // rounding slack of the exact path
    bound +=
        Float::with_val(wp, 2f64).pow(-(prec as i32 - 8)) * (Float::with_val(wp, 1) + exact_sum.clone().abs());
    let sum = exact_sum + Float::with_val(wp, osc.s + osc.c) + tail;
    Ok(RawSum { sum: Float::with_val(prec, sum), bound: Float::with_val(prec, bound), terms })
}
