//! Exact arithmetic for modular groups: projective integer matrices,
//! conjugated congruence subgroups, Fricke-type involutions, CM points, and
//! the bounded enumerations feeding the lattice sums.

use crate::R;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::ops::CompleteRound;
use rug::Float;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModError {
    #[error("matrix has non-unit determinant {0}")]
    NonUnitDeterminant(i64),
    #[error("matrix is not projectively integral after conjugation")]
    NotProjectivelyIntegral,
    #[error("matrix is not elliptic (trace^2 >= 4 det)")]
    NotElliptic,
    #[error("gcd(m, N) must be 1, got m={0}, N={1}")]
    NotCoprime(u64, u64),
    #[error("group label has no explicit presentation: {0}")]
    LabelOnly(String),
    #[error("cannot parse group label: {0}")]
    ParseError(String),
    #[error("determinant must be positive")]
    NonPositiveDeterminant,
    #[error("invalid quadratic form: {0}")]
    BadForm(String),
}

fn gcd4(a: i64, b: i64, c: i64, d: i64) -> i64 {
    a.abs().gcd(&b.abs()).gcd(&c.abs()).gcd(&d.abs())
}

/// Exact integer 2x2 matrix of positive determinant, stored in primitive
/// form (content 1, first nonzero entry of (a,b,c,d) positive). M and -M
/// are identified.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ProjectiveMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl ProjectiveMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, ModError> {
        let det = (a as i128) * (d as i128) - (b as i128) * (c as i128);
        if det <= 0 {
            return Err(ModError::NonPositiveDeterminant);
        }
        let g = gcd4(a, b, c, d);
        let (mut a, mut b, mut c, mut d) = (a / g, b / g, c / g, d / g);
        let first = [a, b, c, d].into_iter().find(|&x| x != 0).unwrap();
        if first < 0 {
            a = -a;
            b = -b;
            c = -c;
            d = -d;
        }
        Ok(ProjectiveMatrix { a, b, c, d })
    }

    pub fn identity() -> Self {
        ProjectiveMatrix { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn det(&self) -> i64 {
        let det = (self.a as i128) * (self.d as i128) - (self.b as i128) * (self.c as i128);
        i64::try_from(det).expect("determinant overflow")
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = (self.a as i128) * (o.a as i128) + (self.b as i128) * (o.c as i128);
        let b = (self.a as i128) * (o.b as i128) + (self.b as i128) * (o.d as i128);
        let c = (self.c as i128) * (o.a as i128) + (self.d as i128) * (o.c as i128);
        let d = (self.c as i128) * (o.b as i128) + (self.d as i128) * (o.d as i128);
        let narrow = |x: i128| i64::try_from(x).expect("matrix product overflow");
        ProjectiveMatrix::new(narrow(a), narrow(b), narrow(c), narrow(d)).expect("product det > 0")
    }

    /// Adjugate; projectively this is the inverse.
    pub fn adjugate(&self) -> Self {
        ProjectiveMatrix::new(self.d, -self.b, -self.c, self.a).expect("adjugate det > 0")
    }

    /// Projective conjugation g -> self * g * self^{-1}.
    pub fn conj_pm(&self, g: &Self) -> Self {
        self.mul(g).mul(&self.adjugate())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    /// Sort key used for deterministic enumeration output.
    pub fn enum_key(&self) -> (i64, i64, i64, i64, i64) {
        (self.c.abs(), self.c, self.d.abs(), self.d, self.a)
    }

    pub fn to_qmat(&self) -> QMat2 {
        QMat2::from_i64(self.a, self.b, self.c, self.d)
    }
}

impl std::fmt::Display for ProjectiveMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// Rational 2x2 matrix (conjugators).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat2 {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl QMat2 {
    pub fn identity() -> Self {
        QMat2::from_i64(1, 0, 0, 1)
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        QMat2 { a: q(a), b: q(b), c: q(c), d: q(d) }
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        assert!(!det.is_zero(), "singular conjugator");
        QMat2 {
            a: &self.d / &det,
            b: -&self.b / &det,
            c: -&self.c / &det,
            d: &self.a / &det,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        QMat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }
}

/// Point on the upper half-plane carrying its working precision.
#[derive(Clone, Debug)]
pub struct PointH {
    pub x: R,
    pub y: R,
}

impl PointH {
    pub fn new(x: R, y: R) -> Self {
        assert!(y.is_sign_positive() && !y.is_zero(), "point must lie in the upper half-plane");
        PointH { x, y }
    }

    pub fn from_f64(x: f64, y: f64, prec: u32) -> Self {
        PointH::new(Float::with_val(prec, x), Float::with_val(prec, y))
    }

    pub fn prec(&self) -> u32 {
        self.x.prec().max(self.y.prec())
    }
}

fn rational_to_float(q: &BigRational, prec: u32) -> R {
    let num = Float::parse(q.numer().to_string()).unwrap().complete(prec);
    let den = Float::parse(q.denom().to_string()).unwrap().complete(prec);
    num / den
}

/// CM point as an integral binary quadratic form A x^2 + B xy + C y^2 of
/// negative discriminant, identified with tau = (-B + i sqrt|D|)/(2A).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CMPoint {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl CMPoint {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, ModError> {
        let d = b * b - 4 * a * c;
        if d >= 0 {
            return Err(ModError::BadForm(format!("disc {} not negative", d)));
        }
        let g = gcd4(a, b, c, 0);
        let (mut a, mut b, mut c) = (a / g, b / g, c / g);
        if a < 0 {
            a = -a;
            b = -b;
            c = -c;
        }
        if a == 0 {
            return Err(ModError::BadForm("A must be nonzero".into()));
        }
        Ok(CMPoint { a, b, c })
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn tau(&self, prec: u32) -> PointH {
        let x = Float::with_val(prec, -self.b) / Float::with_val(prec, 2 * self.a);
        let y = Float::with_val(prec, -self.disc()).sqrt() / Float::with_val(prec, 2 * self.a);
        PointH::new(x, y)
    }

    /// Image form under the projective action of g: the form vanishing at
    /// g(tau). Obtained by substituting tau = g^{-1} tau' and clearing.
    pub fn transform(&self, g: &ProjectiveMatrix) -> Self {
        let (a, b, c, d) = (g.a, g.b, g.c, g.d);
        let (qa, qb, qc) = (self.a, self.b, self.c);
        let na = qa * d * d - qb * c * d + qc * c * c;
        let nb = -2 * qa * b * d + qb * (a * d + b * c) - 2 * qc * a * c;
        let nc = qa * b * b - qb * a * b + qc * a * a;
        CMPoint::new(na, nb, nc).expect("transform preserves negativity of disc")
    }

    /// SL2(Z)-reduced representative (|B| <= A <= C, with B >= 0 on the
    /// boundary cases).
    pub fn sl2_reduced(&self) -> Self {
        let (mut a, mut b) = (self.a, self.b);
        let mut c;
        loop {
            // translate B into (-A, A]
            let k = (b + a).div_euclid(2 * a);
            b -= 2 * k * a;
            c = (b * b - self.disc()) / (4 * a);
            if a > c {
                // swap outer coefficients; c is recomputed on re-entry
                let (na, nb) = (c, -b);
                a = na;
                b = nb;
                continue;
            }
            break;
        }
        if b < 0 && (a == c || b == -a) {
            b = -b;
        }
        CMPoint { a, b, c }
    }
}

/// Level + conjugator + Atkin-Lehner generators. The base group is
/// Gamma_0 = C * Gamma_0(N) * C^{-1}; the extension is generated over it by
/// the listed Fricke-type involutions (given in the ambient coordinates).
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub level: u64,
    pub conjugator: QMat2,
    pub atkin_lehner: Vec<ProjectiveMatrix>,
    pub label: String,
}

impl GroupSpec {
    pub fn new(
        level: u64,
        conjugator: QMat2,
        atkin_lehner: Vec<ProjectiveMatrix>,
        label: String,
    ) -> Result<Self, ModError> {
        if atkin_lehner.len() > 2 {
            return Err(ModError::ParseError(format!(
                "at most 2 Fricke-type generators supported, got {}",
                atkin_lehner.len()
            )));
        }
        for w in &atkin_lehner {
            if !w.mul(w).is_identity() {
                return Err(ModError::ParseError(format!(
                    "generator {} does not square to the identity projectively",
                    w
                )));
            }
        }
        Ok(GroupSpec { level, conjugator, atkin_lehner, label })
    }

    /// Plain Gamma_0(N) with no involutions (used as a base group).
    pub fn gamma0(n: u64) -> Self {
        GroupSpec {
            level: n,
            conjugator: QMat2::identity(),
            atkin_lehner: vec![],
            label: format!("G0({})", n),
        }
    }

    /// Parse the label grammar: optional "conj[p,q,r,s]:" prefix, then
    /// "G0(N)" with zero or more "+a" suffixes. Returns LabelOnly for
    /// labels whose "+a" has no explicit matrix in the supported set.
    pub fn parse_label(label: &str) -> Result<Self, ModError> {
        let full = label.trim();
        let mut rest = full;
        let mut conj = QMat2::identity();
        if let Some(stripped) = rest.strip_prefix("conj[") {
            let (inside, after) = stripped
                .split_once("]:")
                .ok_or_else(|| ModError::ParseError(full.into()))?;
            let parts: Vec<&str> = inside.split(',').collect();
            if parts.len() != 4 {
                return Err(ModError::ParseError(full.into()));
            }
            let q: Result<Vec<BigRational>, ModError> =
                parts.iter().map(|p| parse_rational(p.trim())).collect();
            let q = q?;
            conj = QMat2 { a: q[0].clone(), b: q[1].clone(), c: q[2].clone(), d: q[3].clone() };
            if conj.det().is_zero() {
                return Err(ModError::ParseError(format!("singular conjugator in {}", full)));
            }
            rest = after;
        }
        let body = rest
            .strip_prefix("G0(")
            .ok_or_else(|| ModError::LabelOnly(full.into()))?;
        let (nstr, tail) = body
            .split_once(')')
            .ok_or_else(|| ModError::ParseError(full.into()))?;
        let n: u64 = nstr
            .parse()
            .map_err(|_| ModError::ParseError(full.into()))?;
        if n == 0 {
            return Err(ModError::ParseError(full.into()));
        }
        let mut gens = vec![];
        if !tail.is_empty() {
            for piece in tail.split('+') {
                if piece.is_empty() {
                    continue;
                }
                let a: u64 = piece
                    .parse()
                    .map_err(|_| ModError::ParseError(full.into()))?;
                gens.push(atkin_lehner_matrix(n, a, full)?);
            }
        }
        GroupSpec::new(n, conj, gens, full.to_string())
    }

    /// tau in the un-conjugated coordinates where the base group is the
    /// literal Gamma_0(N).
    pub fn to_base_coords(&self, tau: &PointH) -> PointH {
        if self.conjugator.is_identity() {
            return tau.clone();
        }
        moebius_apply_q(&self.conjugator.inverse(), tau)
    }

    pub fn from_base_coords(&self, tau: &PointH) -> PointH {
        if self.conjugator.is_identity() {
            return tau.clone();
        }
        moebius_apply_q(&self.conjugator, tau)
    }

    /// Random element of the base group Gamma_0 as a word in the standard
    /// generators of Gamma_0(N), conjugated back.
    pub fn random_element(&self, rng: &mut impl rand::Rng, max_len: usize) -> ProjectiveMatrix {
        let t = ProjectiveMatrix::new(1, 1, 0, 1).unwrap();
        let l = ProjectiveMatrix::new(1, 0, self.level as i64, 1).unwrap();
        let ti = t.adjugate();
        let li = l.adjugate();
        let mut g = ProjectiveMatrix::identity();
        let len = rng.gen_range(0..=max_len);
        for _ in 0..len {
            let pick = match rng.gen_range(0..4) {
                0 => &t,
                1 => &ti,
                2 => &l,
                _ => &li,
            };
            g = g.mul(pick);
        }
        if self.conjugator.is_identity() {
            g
        } else {
            conj_q(&g, &self.conjugator).expect("conjugated group element is integral")
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ModError> {
    let bad = || ModError::ParseError(format!("bad rational {}", s));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.trim().parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

/// The matrix named by "+a" on level N. Supported: a = N (the Fricke
/// involution) and the level-6 "+3" involution beta_3 with integer
/// representative (3 -1; 12 -3).
fn atkin_lehner_matrix(n: u64, a: u64, label: &str) -> Result<ProjectiveMatrix, ModError> {
    if a == n {
        return Ok(fricke(n));
    }
    if n == 6 && a == 3 {
        return ProjectiveMatrix::new(3, -1, 12, -3);
    }
    if n == 8 && a == 4 {
        // W_4 normalizes the conjugated group of the "(4,2)" presentation.
        return Ok(fricke(4));
    }
    Err(ModError::LabelOnly(label.into()))
}

/// Fricke involution W_N, stored without the 1/sqrt(N) scaling.
pub fn fricke(n: u64) -> ProjectiveMatrix {
    ProjectiveMatrix::new(0, 1, -(n as i64), 0).expect("fricke det = N > 0")
}

/// Apply g to tau by the Moebius action, at tau's precision.
pub fn moebius_apply(g: &ProjectiveMatrix, tau: &PointH) -> PointH {
    let prec = tau.prec();
    let f = |v: i64| Float::with_val(prec, v);
    let cx_d = f(g.c) * &tau.x + f(g.d);
    let cy = f(g.c) * &tau.y;
    let den = cx_d.clone().square() + cy.square();
    let ax_b = f(g.a) * &tau.x + f(g.b);
    // (a tau + b)(conj(c tau + d)) = (ax+b)(cx+d) + ac y^2 + i det y
    let xnum = ax_b * &cx_d + f(g.a) * f(g.c) * tau.y.clone().square();
    let ynum = f(g.det()) * &tau.y;
    PointH::new(xnum / &den, ynum / den)
}

/// Moebius action of a rational matrix with positive determinant.
pub fn moebius_apply_q(m: &QMat2, tau: &PointH) -> PointH {
    let prec = tau.prec();
    let det = m.det();
    assert!(det.is_positive(), "conjugator must preserve the upper half-plane");
    let f = |q: &BigRational| rational_to_float(q, prec);
    let (a, b, c, d) = (f(&m.a), f(&m.b), f(&m.c), f(&m.d));
    let cx_d = c.clone() * &tau.x + d;
    let cy = c.clone() * &tau.y;
    let den = cx_d.clone().square() + cy.square();
    let ax_b = a.clone() * &tau.x + b;
    let xnum = ax_b * &cx_d + a * c * tau.y.clone().square();
    let ynum = f(&det) * &tau.y;
    PointH::new(xnum / &den, ynum / den)
}

/// Membership of a determinant-1 matrix in the base group of G.
pub fn is_member(g: &ProjectiveMatrix, spec: &GroupSpec) -> Result<bool, ModError> {
    if g.det() != 1 {
        return Err(ModError::NonUnitDeterminant(g.det()));
    }
    let h = if spec.conjugator.is_identity() {
        g.to_qmat()
    } else {
        let ci = spec.conjugator.inverse();
        ci.mul(&g.to_qmat()).mul(&spec.conjugator)
    };
    let ints: Option<Vec<BigInt>> = [&h.a, &h.b, &h.c, &h.d]
        .iter()
        .map(|q| if q.denom().is_one() { Some(q.numer().clone()) } else { None })
        .collect();
    let Some(e) = ints else { return Ok(false) };
    let n = BigInt::from(spec.level);
    Ok((&e[2] % &n).is_zero())
}

/// Conjugate g by a rational matrix C, i.e. the primitive integer form of
/// C^{-1} g C (so that the conjugate of W_3 by (1 0; -3 1) is the level-6
/// involution (3 -1; 12 -3)).
pub fn conjugate(g: &ProjectiveMatrix, c: &QMat2) -> Result<ProjectiveMatrix, ModError> {
    conj_q(g, &c.inverse())
}

/// Primitive integer form of C g C^{-1} (the base-group convention: the
/// group of a GroupSpec is C Gamma_0(N) C^{-1}).
pub fn conj_q(g: &ProjectiveMatrix, c: &QMat2) -> Result<ProjectiveMatrix, ModError> {
    let h = c.mul(&g.to_qmat()).mul(&c.inverse());
    let mut den = BigInt::one();
    for q in [&h.a, &h.b, &h.c, &h.d] {
        den = den.lcm(q.denom());
    }
    let e: Vec<BigInt> = [&h.a, &h.b, &h.c, &h.d]
        .iter()
        .map(|q| q.numer() * (&den / q.denom()))
        .collect();
    let to64 = |x: &BigInt| x.to_i64().ok_or(ModError::NotProjectivelyIntegral);
    ProjectiveMatrix::new(to64(&e[0])?, to64(&e[1])?, to64(&e[2])?, to64(&e[3])?)
        .map_err(|_| ModError::NotProjectivelyIntegral)
}

/// Fixed point of an elliptic matrix as a CM form: c t^2 + (d-a) t - b = 0.
pub fn fixed_point(g: &ProjectiveMatrix) -> Result<CMPoint, ModError> {
    let tr = g.trace();
    if tr * tr >= 4 * g.det() {
        return Err(ModError::NotElliptic);
    }
    CMPoint::new(g.c, g.d - g.a, -g.b).map_err(|_| ModError::NotElliptic)
}

/// Hyperbolic point-pair invariant u = 1 + |tau - sigma|^2 / (2 y_tau y_sigma).
pub fn point_pair_invariant(tau: &PointH, sigma: &PointH) -> R {
    let prec = tau.prec().max(sigma.prec());
    let dx = Float::with_val(prec, &tau.x - &sigma.x);
    let dy = Float::with_val(prec, &tau.y - &sigma.y);
    let num = dx.square() + dy.square();
    let den = Float::with_val(prec, 2) * &tau.y * &sigma.y;
    Float::with_val(prec, 1) + num / den
}

/// All gamma in the base group of G with u(tau, gamma sigma) <= u_max,
/// deduplicated and sorted by (|c|, c, |d|, d, a).
pub fn enumerate_near(
    spec: &GroupSpec,
    tau: &PointH,
    sigma: &PointH,
    u_max: &R,
) -> Vec<ProjectiveMatrix> {
    let tb = spec.to_base_coords(tau);
    let sb = spec.to_base_coords(sigma);
    let n = spec.level as i64;
    let u = u_max.to_f64();
    let (xt, yt) = (tb.x.to_f64(), tb.y.to_f64());
    let (xs, ys) = (sb.x.to_f64(), sb.y.to_f64());
    // y-ratio window: rho + 1/rho <= 2u with rho = q y_t / y_s
    let slack = 1.0 + 1e-9;
    let rho_hi = (u + (u * u - 1.0).max(0.0).sqrt()) * slack;
    let q_hi = rho_hi * ys / yt;
    let mut found: BTreeSet<(i64, i64, i64, i64, i64, ProjectiveMatrix)> = BTreeSet::new();
    let mut consider = |a: i64, b: i64, c: i64, d: i64| {
        let Ok(g) = ProjectiveMatrix::new(a, b, c, d) else { return };
        let w = moebius_apply(&g, &sb);
        let uu = point_pair_invariant(&tb, &w);
        if uu <= *u_max {
            let gg = if spec.conjugator.is_identity() {
                g
            } else {
                conj_q(&g, &spec.conjugator).expect("group element stays integral")
            };
            let k = gg.enum_key();
            found.insert((k.0, k.1, k.2, k.3, k.4, gg));
        }
    };
    let k_range = |xw: f64, yw: f64| -> Option<(i64, i64)> {
        let r2 = 2.0 * yt * yw * (u - 1.0) * slack - (yt - yw) * (yt - yw) / slack;
        if r2 < 0.0 {
            return None;
        }
        let r = r2.sqrt();
        let center = xt - xw;
        Some(((center - r).floor() as i64, (center + r).ceil() as i64))
    };
    // c = 0: translations
    if let Some((k0, k1)) = k_range(xs, ys) {
        for k in k0..=k1 {
            consider(1, k, 0, 1);
        }
    }
    // c > 0, multiples of N
    let c_max = (q_hi.sqrt() / ys).ceil() as i64;
    let mut c = n.max(1);
    while c <= c_max {
        let rad2 = q_hi - (c as f64 * ys) * (c as f64 * ys);
        if rad2 >= 0.0 {
            let rad = rad2.sqrt();
            let d0 = (-(c as f64) * xs - rad).floor() as i64;
            let d1 = (-(c as f64) * xs + rad).ceil() as i64;
            for d in d0..=d1 {
                if c.gcd(&d) != 1 {
                    continue;
                }
                // base solution of a d - b c = 1
                let (_, a0, bneg) = ext_gcd(d, c);
                let (a0, b0) = (a0, -bneg);
                debug_assert_eq!(a0 * d - b0 * c, 1);
                let q = (c as f64 * xs + d as f64).powi(2) + (c as f64 * ys).powi(2);
                let yw = ys / q;
                let xw = {
                    let g = ProjectiveMatrix { a: a0, b: b0, c, d };
                    let num = (a0 as f64 * xs + b0 as f64) * (c as f64 * xs + d as f64)
                        + (a0 as f64) * (c as f64) * ys * ys;
                    let _ = g;
                    num / q
                };
                if let Some((k0, k1)) = k_range(xw, yw) {
                    for k in k0..=k1 {
                        consider(a0 + k * c, b0 + k * d, c, d);
                    }
                }
            }
        }
        c += n.max(1);
    }
    found.into_iter().map(|t| t.5).collect()
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            return (-a, -1, 0);
        }
        return (a, 1, 0);
    }
    let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
    (g, t, s - a.div_euclid(b) * t)
}

/// Right-coset representatives for the Hecke operator T_m on level N,
/// gcd(m,N)=1: upper-triangular (a b; 0 d), ad = m, 0 <= b < d, primitive.
pub fn hecke_cosets(m: u64, n: u64) -> Result<Vec<ProjectiveMatrix>, ModError> {
    if m.gcd(&n) != 1 {
        return Err(ModError::NotCoprime(m, n));
    }
    let mut out = vec![];
    for a in 1..=m {
        if m % a != 0 {
            continue;
        }
        let d = m / a;
        for b in 0..d {
            if gcd4(a as i64, b as i64, d as i64, 0) == 1 {
                out.push(ProjectiveMatrix::new(a as i64, b as i64, 0, d as i64).unwrap());
            }
        }
    }
    Ok(out)
}

/// Representatives of CM forms (A,B,C) with N | A and 0 < -D <= Dmax,
/// deduplicated by the (disc, B mod 2N, SL2-reduced form) key.
pub fn cm_points(spec: &GroupSpec, dmax: u64) -> Vec<CMPoint> {
    let n = spec.level as i64;
    let dmax = dmax as i64;
    let mut seen = BTreeSet::new();
    let mut out = vec![];
    let mut a = n;
    while a <= dmax.max(n) {
        for b in -a..=a {
            let cmax = (dmax + b * b) / (4 * a);
            for c in 1..=cmax {
                let d = b * b - 4 * a * c;
                if d >= 0 || -d > dmax {
                    continue;
                }
                if gcd4(a, b, c, 0) != 1 {
                    continue;
                }
                let f = CMPoint { a, b, c };
                let key = (d, b.rem_euclid(2 * n), f.sl2_reduced());
                if seen.insert(key) {
                    out.push(f);
                }
            }
        }
        a += n;
    }
    out.sort_by_key(|f| (-f.disc(), f.a, f.b));
    out
}

/// Reduce tau into the standard SL2(Z) fundamental domain. Returns the
/// reduced point and g with g . tau_in = tau_out.
pub fn reduce_sl2(tau: &PointH) -> (PointH, ProjectiveMatrix) {
    let mut p = tau.clone();
    let mut g = ProjectiveMatrix::identity();
    let s = ProjectiveMatrix::new(0, -1, 1, 0).unwrap();
    for _ in 0..10000 {
        let xr = p.x.to_f64().round();
        let k = xr as i64;
        if k != 0 {
            let t = ProjectiveMatrix::new(1, -k, 0, 1).unwrap();
            p = moebius_apply(&t, &p);
            g = t.mul(&g);
        }
        let norm2 = p.x.clone().square() + p.y.clone().square();
        if norm2 < 1 {
            p = moebius_apply(&s, &p);
            g = s.mul(&g);
        } else {
            break;
        }
    }
    // boundary convention x in [-1/2, 1/2)
    let half = Float::with_val(p.prec(), 0.5);
    if p.x >= half {
        let t = ProjectiveMatrix::new(1, -1, 0, 1).unwrap();
        p = moebius_apply(&t, &p);
        g = t.mul(&g);
    } else if p.x < -half.clone() {
        let t = ProjectiveMatrix::new(1, 1, 0, 1).unwrap();
        p = moebius_apply(&t, &p);
        g = t.mul(&g);
    }
    (p, g)
}

#[cfg(test)]
mod tests;
