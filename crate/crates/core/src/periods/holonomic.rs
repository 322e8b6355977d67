//! Holonomic operators for period sequences: exact recurrence guessing,
//! theta-form differential operators, singular loci, Frobenius solutions,
//! mirror maps, and basechange pullback checks.

use super::PeriodSequence;
use crate::exact::linalg::{nullspace_dim_mod_p, nullspace_rational, primitive_integer_vector};
use crate::exact::qseries::QSeries;
use crate::exact::roots::{isolate_real_roots, refine_root};
use crate::exact::zpoly::{QPoly, ZPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HolonomicError {
    #[error("t=0 is not a MUM point: indicial polynomial has a nonzero root")]
    NotMUM,
    #[error("operator form not populated: {0}")]
    MissingForm(&'static str),
    #[error("basechange map must fix t=0 (m(0) = 0, denominator(0) != 0)")]
    BadBasechange,
}

/// Recurrence and/or differential form of a holonomic operator.
///
/// Recurrence form: polynomials p_0..p_r in n with sum_j p_j(n) a_{n+j} = 0.
/// Differential form: polynomials q_0..q_S in t acting as sum_s q_s(t) theta^s
/// with theta = t d/dt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomicOperator {
    pub rec: Option<Vec<ZPoly>>,
    pub ode: Option<Vec<ZPoly>>,
}

fn normalize_vec(mut polys: Vec<ZPoly>) -> Vec<ZPoly> {
    let mut g = BigInt::zero();
    for p in &polys {
        use num_integer::Integer;
        g = g.gcd(&p.content());
    }
    if g.is_zero() {
        return polys;
    }
    if let Some(last) = polys.iter().rev().find(|p| !p.is_zero()) {
        if last.leading().is_negative() {
            g = -g;
        }
    }
    for p in polys.iter_mut() {
        *p = ZPoly::new(p.coeffs.iter().map(|c| c / &g).collect());
    }
    polys
}

impl HolonomicOperator {
    pub fn from_rec(polys: Vec<ZPoly>) -> Self {
        HolonomicOperator { rec: Some(normalize_vec(polys)), ode: None }
    }

    pub fn from_ode(polys: Vec<ZPoly>) -> Self {
        HolonomicOperator { rec: None, ode: Some(normalize_vec(polys)) }
    }

    pub fn rec_order(&self) -> Option<usize> {
        self.rec.as_ref().map(|p| p.len() - 1)
    }

    pub fn ode_order(&self) -> Option<usize> {
        self.ode.as_ref().map(|p| p.len() - 1)
    }
}

/// Guess the minimal (order, then degree) recurrence annihilating the
/// sequence, requiring at least 10 surplus equations. All available
/// equations enter the nullspace solve, so any solution satisfies the
/// surplus automatically.
pub fn find_recurrence(
    seq: &PeriodSequence,
    max_order: usize,
    max_degree: usize,
) -> Option<HolonomicOperator> {
    let a = &seq.terms;
    for r in 1..=max_order {
        for deg in 0..=max_degree {
            let unknowns = (r + 1) * (deg + 1);
            if a.len() < r + unknowns + 10 {
                continue;
            }
            let neq = a.len() - r;
            let mut zrows: Vec<Vec<BigInt>> = Vec::with_capacity(neq);
            for n in 0..neq {
                let mut row = Vec::with_capacity(unknowns);
                for j in 0..=r {
                    let mut npow = BigInt::one();
                    for _ in 0..=deg {
                        row.push(&npow * &a[n + j]);
                        npow *= BigInt::from(n);
                    }
                }
                zrows.push(row);
            }
            if nullspace_dim_mod_p(&zrows, unknowns) == 0 {
                continue;
            }
            let qrows: Vec<Vec<BigRational>> = zrows
                .iter()
                .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
                .collect();
            let ns = nullspace_rational(&qrows, unknowns);
            let Some(v) = ns.iter().find(|v| {
                // need a genuinely order-r operator
                v[r * (deg + 1)..].iter().any(|c| !c.is_zero())
            }) else {
                continue;
            };
            let w = primitive_integer_vector(v);
            let polys: Vec<ZPoly> = (0..=r)
                .map(|j| ZPoly::new(w[j * (deg + 1)..(j + 1) * (deg + 1)].to_vec()))
                .collect();
            return Some(HolonomicOperator::from_rec(polys));
        }
    }
    None
}

/// Continue a sequence with the recurrence; returns rational predictions
/// for the next `count` terms.
pub fn predict_terms(op: &HolonomicOperator, prefix: &[BigInt], count: usize) -> Option<Vec<BigRational>> {
    let rec = op.rec.as_ref()?;
    let r = rec.len() - 1;
    if prefix.len() < r {
        return None;
    }
    let mut vals: Vec<BigRational> = prefix
        .iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect();
    let mut out = vec![];
    for _ in 0..count {
        let n = vals.len() - r;
        let nq = BigRational::from_integer(BigInt::from(n));
        let lead = rec[r].to_qpoly().eval(&nq);
        if lead.is_zero() {
            return None;
        }
        let mut s = BigRational::zero();
        for j in 0..r {
            s += rec[j].to_qpoly().eval(&nq) * &vals[n + j];
        }
        let next = -s / lead;
        vals.push(next.clone());
        out.push(next);
    }
    Some(out)
}

/// Coefficient polynomials Q_i(u) of t^i in the theta-form, so that the
/// operator is sum_i t^i Q_i(theta) and the coefficient of t^m in L(sum
/// a_m t^m) is sum_i Q_i(m - i) a_{m-i}.
fn theta_by_tdegree(ode: &[ZPoly]) -> Vec<ZPoly> {
    let r = ode.iter().map(|q| q.degree()).max().unwrap_or(0);
    (0..=r)
        .map(|i| ZPoly::new(ode.iter().map(|q| q.coeff(i)).collect()))
        .collect()
}

/// Recurrence -> theta-form: Q_i(u) = p_{r-i}(u + i - r).
pub fn rec_to_ode(op: &HolonomicOperator) -> Result<HolonomicOperator, HolonomicError> {
    let rec = op.rec.as_ref().ok_or(HolonomicError::MissingForm("recurrence"))?;
    let r = rec.len() - 1;
    let q_by_t: Vec<ZPoly> = (0..=r)
        .map(|i| rec[r - i].shift(i as i64 - r as i64))
        .collect();
    let smax = q_by_t.iter().map(|q| q.degree()).max().unwrap_or(0);
    let ode: Vec<ZPoly> = (0..=smax)
        .map(|s| ZPoly::new(q_by_t.iter().map(|q| q.coeff(s)).collect()))
        .collect();
    Ok(HolonomicOperator {
        rec: op.rec.clone(),
        ode: Some(normalize_vec(ode)),
    })
}

/// Theta-form -> recurrence: p_j(w) = Q_{r-j}(w + j).
pub fn ode_to_rec(op: &HolonomicOperator) -> Result<HolonomicOperator, HolonomicError> {
    let ode = op.ode.as_ref().ok_or(HolonomicError::MissingForm("differential"))?;
    let q_by_t = theta_by_tdegree(ode);
    let r = q_by_t.len() - 1;
    let rec: Vec<ZPoly> = (0..=r)
        .map(|j| q_by_t[r - j].shift(j as i64))
        .collect();
    Ok(HolonomicOperator {
        rec: Some(normalize_vec(rec)),
        ode: op.ode.clone(),
    })
}

/// Apply the theta-form operator to a truncated series.
pub fn apply_ode(ode: &[ZPoly], f: &QSeries) -> QSeries {
    let n = f.order();
    let q_by_t = theta_by_tdegree(ode);
    let mut out = QSeries::zero(n);
    for m in 0..n {
        let mut s = BigRational::zero();
        for (i, q) in q_by_t.iter().enumerate() {
            if i > m {
                break;
            }
            let u = BigRational::from_integer(BigInt::from(m as i64 - i as i64));
            s += q.to_qpoly().eval(&u) * f.coeff(m - i);
        }
        out.coeffs[m] = s;
    }
    out
}

/// One singular point of the leading coefficient: exact rational value, or
/// a refined isolating interval for a real irrational root.
#[derive(Clone, Debug)]
pub struct SingularPoint {
    pub exact: Option<BigRational>,
    pub lo: BigRational,
    pub hi: BigRational,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct SingularLocus {
    /// Distinct finite nonzero roots over C of the leading theta-form
    /// coefficient (real ones located, complex ones counted).
    pub finite_count: usize,
    /// Located real points (exact rationals or certified intervals).
    pub real_points: Vec<SingularPoint>,
    /// Number of nonreal conjugate root pairs.
    pub complex_pairs: usize,
    pub at_zero: bool,
    /// True when the exponents at infinity differ from those of an
    /// ordinary point (0, 1, ..., order-1).
    pub at_infinity: bool,
    /// Squarefree part of the leading coefficient with t-power stripped.
    pub squarefree: ZPoly,
}

fn pow10_inv(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u32).pow(k))
}

/// Singular points of the differential operator: roots of the leading
/// theta-coefficient, with t=0 and infinity reported separately.
pub fn singular_points(op: &HolonomicOperator) -> Result<SingularLocus, HolonomicError> {
    let ode = op.ode.as_ref().ok_or(HolonomicError::MissingForm("differential"))?;
    let order = ode.len() - 1;
    let lead = ode[order].clone();
    assert!(!lead.is_zero());
    // strip the t-power
    let val = lead.coeffs.iter().position(|c| !c.is_zero()).unwrap();
    let at_zero = val > 0;
    let core = ZPoly::new(lead.coeffs[val..].to_vec());
    let sf = core.squarefree_part();
    let finite_count = sf.degree();
    // multiplicity of a root = largest k with (t - root)^k | core; recover
    // via repeated division by the squarefree part's factors
    let mut real_points = vec![];
    let eps = pow10_inv(22);
    let rationals = sf.rational_roots();
    let mut rem = sf.clone();
    for root in &rationals {
        let denom = root.denom().clone();
        let numer = root.numer().clone();
        let lin = ZPoly::new(vec![-numer.clone(), denom.clone()]);
        let mut mult = 0;
        let mut probe = core.clone();
        while probe.divisible_by(&lin) {
            probe = probe.div_exact(&lin);
            mult += 1;
        }
        rem = rem.div_exact(&lin);
        real_points.push(SingularPoint {
            exact: Some(root.clone()),
            lo: root.clone(),
            hi: root.clone(),
            multiplicity: mult,
        });
    }
    let mut real_irrational = 0;
    if rem.degree() >= 1 {
        for (lo, hi) in isolate_real_roots(&rem, &eps) {
            let (lo, hi) = refine_root(&rem, &lo, &hi, &eps);
            real_irrational += 1;
            real_points.push(SingularPoint { exact: None, lo, hi, multiplicity: 1 });
        }
    }
    let complex_pairs = (finite_count - rationals.len() - real_irrational) / 2;
    // exponents at infinity: roots of Q_r(-nu), with r the top t-degree
    let q_by_t = theta_by_tdegree(ode);
    let chi_inf = {
        let top = q_by_t.last().unwrap();
        ZPoly::new(
            top.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c })
                .collect(),
        )
    };
    let ordinary: ZPoly = (0..order as i64).fold(ZPoly::one(), |acc, k| {
        acc.mul(&ZPoly::from_i64(&[-k, 1]))
    });
    let at_infinity = chi_inf.normalized() != ordinary.normalized();
    Ok(SingularLocus {
        finite_count,
        real_points,
        complex_pairs,
        at_zero,
        at_infinity,
        squarefree: sf,
    })
}

/// Frobenius pair at the MUM point t=0: holomorphic solution f (f(0)=1)
/// and the log partner g = f log t + h with h(0)=0.
pub struct FrobeniusPair {
    pub f: QSeries,
    pub h: QSeries,
}

pub fn frobenius_solutions(op: &HolonomicOperator, n_max: usize) -> Result<FrobeniusPair, HolonomicError> {
    let ode = op.ode.as_ref().ok_or(HolonomicError::MissingForm("differential"))?;
    let order = ode.len() - 1;
    // MUM: indicial polynomial at 0 must be a constant times nu^order
    for (s, q) in ode.iter().enumerate() {
        if s < order && !q.coeff(0).is_zero() {
            return Err(HolonomicError::NotMUM);
        }
    }
    let c_top = ode[order].coeff(0);
    if c_top.is_zero() {
        return Err(HolonomicError::NotMUM);
    }
    let q_by_t = theta_by_tdegree(ode);
    let qq: Vec<QPoly> = q_by_t.iter().map(|q| q.to_qpoly()).collect();
    let dqq: Vec<QPoly> = q_by_t.iter().map(|q| q.derivative().to_qpoly()).collect();
    let chi0 = |m: usize| -> BigRational {
        let mq = BigRational::from_integer(BigInt::from(m));
        qq[0].eval(&mq)
    };
    let n = n_max + 1;
    let mut f = QSeries::zero(n);
    f.coeffs[0] = BigRational::one();
    for m in 1..n {
        let mut s = BigRational::zero();
        for i in 1..qq.len().min(m + 1) {
            let u = BigRational::from_integer(BigInt::from(m as i64 - i as i64));
            s += qq[i].eval(&u) * &f.coeffs[m - i];
        }
        f.coeffs[m] = -s / chi0(m);
    }
    // L(f log t + h) = 0 forces L h = -(dL/dtheta) f
    let mut h = QSeries::zero(n);
    for m in 1..n {
        let mut rhs = BigRational::zero();
        for i in 0..qq.len().min(m + 1) {
            let u = BigRational::from_integer(BigInt::from(m as i64 - i as i64));
            rhs -= dqq[i].eval(&u) * &f.coeffs[m - i];
        }
        let mut s = BigRational::zero();
        for i in 1..qq.len().min(m + 1) {
            let u = BigRational::from_integer(BigInt::from(m as i64 - i as i64));
            s += qq[i].eval(&u) * &h.coeffs[m - i];
        }
        h.coeffs[m] = (rhs - s) / chi0(m);
    }
    Ok(FrobeniusPair { f, h })
}

/// Mirror map: q(t) = t exp(h/f) and its reversion t(q), both to the
/// series order of the inputs.
pub struct MirrorMap {
    /// coefficients of q(t), valuation 1
    pub q_of_t: QSeries,
    /// coefficients of t(q), valuation 1
    pub t_of_q: QSeries,
}

pub fn mirror_map(fr: &FrobeniusPair) -> MirrorMap {
    let n = fr.f.order();
    let e = fr.h.mul(&fr.f.inverse()).exp();
    let q_of_t = QSeries::t(n).mul(&e);
    let t_of_q = q_of_t.reversion();
    MirrorMap { q_of_t, t_of_q }
}

/// Rational basechange map m(t) = num/den with m(0) = 0.
#[derive(Clone, Debug)]
pub struct BasechangeMap {
    pub num: QPoly,
    pub den: QPoly,
}

impl BasechangeMap {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self, HolonomicError> {
        if num.coeff(0) != BigRational::zero() || den.coeff(0).is_zero() {
            return Err(HolonomicError::BadBasechange);
        }
        Ok(BasechangeMap { num, den })
    }

    pub fn to_series(&self, order: usize) -> QSeries {
        let num = QSeries::new(self.num.coeffs.clone(), order);
        let den = QSeries::new(self.den.coeffs.clone(), order);
        num.mul(&den.inverse())
    }
}

#[derive(Clone, Debug)]
pub struct PullbackReport {
    pub pass: bool,
    /// prefactor p(t) = p_num / p_den with deg <= 2 each
    pub p_num: QPoly,
    pub p_den: QPoly,
    pub checked_order: usize,
    pub first_mismatch: Option<usize>,
}

/// Check that the series of seqB is a degree-<=2 rational prefactor times
/// the pullback along m of the holomorphic solution of op_a, through the
/// stated order: find P, Q with B Q = P (F o m) from the leading
/// coefficients, then verify the identity through `order`.
pub fn pullback_check(
    op_a: &HolonomicOperator,
    m: &BasechangeMap,
    seq_b: &[BigInt],
    order: usize,
) -> Result<PullbackReport, HolonomicError> {
    let n = order + 1;
    let fr = frobenius_solutions(op_a, order)?;
    let fm = fr.f.compose(&m.to_series(n));
    let b = QSeries::new(
        seq_b.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        n,
    );
    // solve B * (q0 + q1 t + q2 t^2) - (F o m) * (p0 + p1 t + p2 t^2) = 0
    // on an overdetermined window of leading coefficients
    let window = 12.min(n);
    let mut rows = vec![];
    for k in 0..window {
        let mut row = vec![BigRational::zero(); 6];
        for j in 0..3 {
            if k >= j {
                row[j] = b.coeff(k - j);
                row[3 + j] = -fm.coeff(k - j);
            }
        }
        rows.push(row);
    }
    let ns = nullspace_rational(&rows, 6);
    let Some(v) = ns.iter().find(|v| !v[0].is_zero()) else {
        return Ok(PullbackReport {
            pass: false,
            p_num: QPoly::zero(),
            p_den: QPoly::zero(),
            checked_order: order,
            first_mismatch: Some(0),
        });
    };
    let q = QPoly::new(v[0..3].to_vec());
    let p = QPoly::new(v[3..6].to_vec());
    let lhs = b.mul(&QSeries::new(q.coeffs.clone(), n));
    let rhs = fm.mul(&QSeries::new(p.coeffs.clone(), n));
    let diff = lhs.sub(&rhs);
    let first_mismatch = diff.coeffs.iter().position(|c| !c.is_zero());
    Ok(PullbackReport {
        pass: first_mismatch.is_none(),
        p_num: p,
        p_den: q,
        checked_order: order,
        first_mismatch,
    })
}
