//! Weight-4 higher Green's functions on Fricke-extended congruence groups:
//! evaluation with error bounds, Hecke translates, relation combinations,
//! Fricke antisymmetrization, and the axiom-checking utilities.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rug::ops::CompleteRound;
use rug::Float;

use crate::modgroup::{
    enumerate_near, ext_gcd, hecke_cosets, moebius_apply, CMPoint, GroupSpec, ModError, PointH,
    ProjectiveMatrix,
};

mod sums;
#[cfg(test)]
mod tests;

pub use sums::legendre_q1;
pub use crate::modgroup::point_pair_invariant;

#[derive(Debug, thiserror::Error)]
pub enum GreenError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("evaluation point lies on (or too near) the pole orbit")]
    PoleHit,
    #[error("antisymmetrized function vanishes identically: some involution fixes the pole orbit")]
    DegeneratePole,
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(u64, u64),
    #[error("finite-difference step too small: stencil noise exceeds the tolerance")]
    StepTooSmall,
    #[error("log fit residual {residual} exceeds 5% of the coefficient {c}")]
    BadFit { c: f64, residual: f64 },
    #[error(transparent)]
    Mod(#[from] ModError),
}

/// A Green's function G_b: the group and the pole (weight fixed at 4, k = 2).
#[derive(Clone, Debug)]
pub struct GreenSpec {
    pub group: GroupSpec,
    pub pole: CMPoint,
}

/// Rational combination sum_m a_m T_m. The defining property (annihilating
/// the weight-4 cusp forms) is not verified internally.
#[derive(Clone, Debug)]
pub struct HeckeRelation {
    pub terms: Vec<(u64, BigRational)>,
}

impl HeckeRelation {
    pub fn new(terms: Vec<(u64, BigRational)>, level: u64) -> Result<Self, GreenError> {
        let mut seen = std::collections::BTreeSet::new();
        for (m, _) in &terms {
            if !seen.insert(*m) {
                return Err(GreenError::Domain(format!("duplicate Hecke index {}", m)));
            }
            if num_integer::gcd(*m, level) != 1 {
                return Err(GreenError::NotCoprime(*m, level));
            }
        }
        Ok(HeckeRelation { terms })
    }
}

/// Result of a truncated lattice-sum evaluation.
#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: Float,
    /// truncation pieces + heuristic oscillatory tail + rounding slack
    pub error_bound: Float,
    /// the coset cutoff Q_max used
    pub cutoff: Float,
    pub term_count: u64,
}

fn target_prec(_tau: &PointH, target: &Float) -> u32 {
    let digits = (-target.to_f64().log10()).ceil().max(8.0) as u32 + 8;
    crate::bits_for_digits(digits)
}

/// Move tau to the representative of its Gamma_0(level)-orbit with maximal
/// imaginary part (and |x| <= 1/2).
pub fn reduce_gamma0(level: u64, tau: &PointH) -> PointH {
    let prec = tau.prec();
    let n = level.max(1) as i64;
    let mut p = tau.clone();
    for _ in 0..200 {
        let k = p.x.to_f64().round() as i64;
        if k != 0 {
            p = PointH::new(p.x.clone() - Float::with_val(prec, k), p.y.clone());
        }
        let (x_f, y_f) = (p.x.to_f64(), p.y.to_f64());
        let mut best: Option<(f64, i64, i64)> = None;
        let c_cap = (1.0 / y_f).floor() as i64 + 1;
        let mut c = n;
        while c <= c_cap {
            let d0 = (-(c as f64) * x_f).round() as i64;
            for d in d0 - 2..=d0 + 2 {
                if num_integer::gcd(c, d) != 1 {
                    continue;
                }
                let lin = c as f64 * x_f + d as f64;
                let q = lin * lin + (c as f64 * y_f) * (c as f64 * y_f);
                if q < 1.0 - 1e-12 && best.map_or(true, |(bq, _, _)| q < bq) {
                    best = Some((q, c, d));
                }
            }
            c += n;
        }
        match best {
            Some((_, c, d)) => {
                let (_, u, v) = ext_gcd(c, d);
                // matrix (v, -u; c, d): det = vd + uc = 1
                let g = ProjectiveMatrix::new(v, -u, c, d).expect("unimodular");
                p = moebius_apply(&g, &p);
            }
            None => break,
        }
    }
    let k = p.x.to_f64().round() as i64;
    if k != 0 {
        p = PointH::new(p.x.clone() - Float::with_val(prec, k), p.y.clone());
    }
    p
}

/// Are tau and sigma in the same orbit under the base group of `spec`?
pub fn orbit_equivalent(spec: &GroupSpec, tau: &PointH, sigma: &PointH) -> bool {
    let prec = tau.prec().max(sigma.prec());
    let u = Float::with_val(prec, 1) + Float::with_val(prec, 1e-10);
    !enumerate_near(spec, tau, sigma, &u).is_empty()
}

/// G(tau, sigma) = -2 sum_{gamma in Gamma_0} Q_1(u(tau, gamma sigma)), with
/// an explicit coset cutoff override for two-cutoff consistency tests.
pub fn green_pair_with_cutoff(
    g: &GroupSpec,
    tau: &PointH,
    sigma: &PointH,
    target_error: &Float,
    cutoff: Option<f64>,
) -> Result<EvalResult, GreenError> {
    let prec = target_prec(tau, target_error).max(sigma.prec());
    let lift = |p: &PointH| PointH::new(Float::with_val(prec, &p.x), Float::with_val(prec, &p.y));
    let tb = reduce_gamma0(g.level, &g.to_base_coords(&lift(tau)));
    let sb = reduce_gamma0(g.level, &g.to_base_coords(&lift(sigma)));
    let (yt, ys) = if tb.y >= sb.y {
        (tb.y.to_f64(), sb.y.to_f64())
    } else {
        (sb.y.to_f64(), tb.y.to_f64())
    };
    let qmax = cutoff.unwrap_or_else(|| sums::choose_qmax(yt, ys, target_error.to_f64()));
    let raw = sums::gamma0_q1_sum(g.level, &tb, &sb, qmax, prec)?;
    Ok(EvalResult {
        value: -Float::with_val(prec, 2) * raw.sum,
        error_bound: Float::with_val(prec, 2) * raw.bound,
        cutoff: Float::with_val(prec, qmax),
        term_count: raw.terms,
    })
}

/// G(tau, sigma) with the cutoff chosen from the target error.
pub fn green_pair(
    g: &GroupSpec,
    tau: &PointH,
    sigma: &PointH,
    target_error: &Float,
) -> Result<EvalResult, GreenError> {
    green_pair_with_cutoff(g, tau, sigma, target_error, None)
}

/// G_b(tau): green_pair against the pole of the spec.
pub fn green_basic(
    spec: &GreenSpec,
    tau: &PointH,
    target_error: &Float,
) -> Result<EvalResult, GreenError> {
    let prec = target_prec(tau, target_error);
    let sigma = spec.pole.tau(prec);
    green_pair(&spec.group, tau, &sigma, target_error)
}

/// (T_m G_b)(tau) = sum over Hecke coset representatives of G(rep tau, b).
pub fn hecke_translate(
    m: u64,
    spec: &GreenSpec,
    tau: &PointH,
    target_error: &Float,
) -> Result<EvalResult, GreenError> {
    let reps = hecke_cosets(m, spec.group.level)?;
    let prec = target_prec(tau, target_error);
    let sigma = spec.pole.tau(prec);
    let per_target = target_error.clone() / Float::with_val(target_error.prec(), reps.len() as u64);
    let lift = PointH::new(Float::with_val(prec, &tau.x), Float::with_val(prec, &tau.y));
    let mut value = Float::with_val(prec, 0);
    let mut bound = Float::with_val(prec, 0);
    let mut terms = 0u64;
    let mut cut = Float::with_val(prec, 0);
    for rep in &reps {
        let tb = spec.group.to_base_coords(&lift);
        let moved = spec.group.from_base_coords(&moebius_apply(rep, &tb));
        let r = green_pair(&spec.group, &moved, &sigma, &per_target)?;
        value += r.value;
        bound += r.error_bound;
        terms += r.term_count;
        if r.cutoff > cut {
            cut = r.cutoff;
        }
    }
    Ok(EvalResult { value, error_bound: bound, cutoff: cut, term_count: terms })
}

/// G_{T,b}(tau) = sum_m m a_m (T_m G_b)(tau) (weight 4: m^{k-1} = m).
pub fn green_relation(
    g: &GroupSpec,
    rel: &HeckeRelation,
    pole: &CMPoint,
    tau: &PointH,
    target_error: &Float,
) -> Result<EvalResult, GreenError> {
    let prec = target_prec(tau, target_error);
    if rel.terms.is_empty() {
        return Ok(EvalResult {
            value: Float::with_val(prec, 0),
            error_bound: Float::with_val(prec, 0),
            cutoff: Float::with_val(prec, 0),
            term_count: 0,
        });
    }
    let spec = GreenSpec { group: g.clone(), pole: *pole };
    let total_weight: f64 = rel
        .terms
        .iter()
        .map(|(m, a)| (*m as f64) * a.to_f64().unwrap_or(1.0).abs())
        .sum();
    let mut value = Float::with_val(prec, 0);
    let mut bound = Float::with_val(prec, 0);
    let mut terms = 0u64;
    let mut cut = Float::with_val(prec, 0);
    for (m, a) in &rel.terms {
        let w = Float::with_val(prec, *m as u64) * rational_float(a, prec);
        let per_target = target_error.clone()
            * Float::with_val(target_error.prec(), (*m as f64) * a.to_f64().unwrap_or(1.0).abs())
            / Float::with_val(target_error.prec(), total_weight.max(1e-30));
        let r = hecke_translate(*m, &spec, tau, &per_target)?;
        value += w.clone() * r.value;
        bound += w.abs() * r.error_bound;
        terms += r.term_count;
        if r.cutoff > cut {
            cut = r.cutoff;
        }
    }
    Ok(EvalResult { value, error_bound: bound, cutoff: cut, term_count: terms })
}

fn rational_float(q: &BigRational, prec: u32) -> Float {
    let n = Float::parse(q.numer().to_string()).unwrap().complete(prec);
    let d = Float::parse(q.denom().to_string()).unwrap().complete(prec);
    n / d
}

/// The antisymmetrized function G_hat = sum_{gamma in G} chi(gamma)
/// G_{gamma(pole)}, chi = -1 on each Atkin-Lehner generator.
pub fn green_hat(
    g: &GroupSpec,
    pole: &CMPoint,
    tau: &PointH,
    target_error: &Float,
) -> Result<EvalResult, GreenError> {
    green_hat_with_cutoff(g, pole, tau, target_error, None)
}

/// `green_hat` with an explicit coset cutoff override, for two-cutoff
/// stability tests.
pub fn green_hat_with_cutoff(
    g: &GroupSpec,
    pole: &CMPoint,
    tau: &PointH,
    target_error: &Float,
    cutoff: Option<f64>,
) -> Result<EvalResult, GreenError> {
    let prec = target_prec(tau, target_error);

    // the 2^ell extension elements with characters
    let mut elements: Vec<(ProjectiveMatrix, i32)> = vec![(ProjectiveMatrix::identity(), 1)];
    for w in &g.atkin_lehner {
        let mut next = vec![];
        for (e, chi) in &elements {
            next.push((e.clone(), *chi));
            next.push((e.mul(w), -chi));
        }
        elements = next;
    }
    // degenerate-pole check: some nontrivial gamma maps the pole into its
    // own Gamma_0-orbit
    let pole_tau = pole.tau(prec);
    for (e, _) in elements.iter().skip(1) {
        let moved = pole.transform(e);
        if orbit_equivalent(g, &pole_tau, &moved.tau(prec)) {
            return Err(GreenError::DegeneratePole);
        }
    }
    let per_target =
        target_error.clone() / Float::with_val(target_error.prec(), elements.len() as u64);
    let mut value = Float::with_val(prec, 0);
    let mut bound = Float::with_val(prec, 0);
    let mut terms = 0u64;
    let mut cut = Float::with_val(prec, 0);
    for (e, chi) in &elements {
        let moved = pole.transform(e);
        let sigma = moved.tau(prec);
        let r = green_pair_with_cutoff(g, tau, &sigma, &per_target, cutoff)?;
        if *chi > 0 {
            value += r.value;
        } else {
            value -= r.value;
        }
        bound += r.error_bound;
        terms += r.term_count;
        if r.cutoff > cut {
            cut = r.cutoff;
        }
    }
    Ok(EvalResult { value, error_bound: bound, cutoff: cut, term_count: terms })
}

/// Relative residual of the hyperbolic Laplace equation (Delta + 2) f = 0
/// at tau, using the 5-point stencil with step h. `tol` is the tolerance
/// the caller intends to test against; if the propagated evaluator noise
/// through the stencil exceeds it, StepTooSmall is returned instead of a
/// meaningless residual.
pub fn laplacian_residual(
    f: &mut dyn FnMut(&PointH) -> Result<EvalResult, GreenError>,
    tau: &PointH,
    h: &Float,
    tol: f64,
) -> Result<Float, GreenError> {
    let prec = tau.prec();
    let at = |x: Float, y: Float| PointH::new(x, y);
    let f0 = f(tau)?;
    let fxp = f(&at(tau.x.clone() + h, tau.y.clone()))?;
    let fxm = f(&at(tau.x.clone() - h, tau.y.clone()))?;
    let fyp = f(&at(tau.x.clone(), tau.y.clone() + h))?;
    let fym = f(&at(tau.x.clone(), tau.y.clone() - h))?;
    let h2 = h.clone().square();
    let y2 = tau.y.clone().square();
    let noise: Float = [&f0, &fxp, &fxm, &fyp, &fym]
        .iter()
        .map(|r| r.error_bound.clone())
        .fold(Float::with_val(prec, 0), |a, b| a + b);
    let f0_abs = f0.value.clone().abs();
    let noise_rel = noise * &y2 / &h2 / &f0_abs;
    if noise_rel.to_f64() > tol {
        return Err(GreenError::StepTooSmall);
    }
    let stencil = (fxp.value + fxm.value + fyp.value + fym.value
        - Float::with_val(prec, 4) * &f0.value)
        / h2;
    // Delta_hyp f = -y^2 (f_xx + f_yy); eigenvalue k(1-k) = -2
    let residual = (-(y2 * stencil) + Float::with_val(prec, 2) * &f0.value).abs() / f0_abs;
    Ok(residual)
}

/// Fit f(tau) ~ c ln|tau - tau_hat| + const over a ring of radii
/// [1e-3, 1e-2] * y around tau_hat; returns (c, rms fit residual).
pub fn pole_coefficient(
    f: &mut dyn FnMut(&PointH) -> Result<EvalResult, GreenError>,
    tau_hat: &PointH,
) -> Result<(Float, Float), GreenError> {
    let prec = tau_hat.prec();
    let radii = [1e-3, 2e-3, 5e-3, 1e-2];
    let angles = [0.3f64, 1.4, 2.7, 3.9, 5.1];
    let mut samples: Vec<(Float, Float)> = vec![];
    for rf in radii {
        let r = tau_hat.y.clone() * Float::with_val(prec, rf);
        for th in angles {
            let x = tau_hat.x.clone() + r.clone() * Float::with_val(prec, th.cos());
            let y = tau_hat.y.clone() + r.clone() * Float::with_val(prec, th.sin());
            let v = f(&PointH::new(x, y))?;
            samples.push((r.clone().ln(), v.value));
        }
    }
    let n = Float::with_val(prec, samples.len() as u64);
    let sx: Float = samples.iter().map(|(x, _)| x).fold(Float::with_val(prec, 0), |a, b| a + b);
    let sy: Float = samples.iter().map(|(_, y)| y).fold(Float::with_val(prec, 0), |a, b| a + b);
    let sxx: Float = samples
        .iter()
        .map(|(x, _)| x.clone().square())
        .fold(Float::with_val(prec, 0), |a, b| a + b);
    let sxy: Float = samples
        .iter()
        .map(|(x, y)| (x * y).complete(prec))
        .fold(Float::with_val(prec, 0), |a, b| a + b);
    let det = (n.clone() * &sxx) - sx.clone().square();
    let c = ((n.clone() * &sxy) - (sx.clone() * &sy)) / det.clone();
    let b = ((sxx * &sy) - (sx * &sxy)) / det;
    let mut ss = Float::with_val(prec, 0);
    for (x, y) in &samples {
        let e = y - (c.clone() * x + &b);
        ss += e.square();
    }
    let rms = (ss / n).sqrt();
    if rms.clone() > (Float::with_val(prec, 0.05) * c.clone().abs()) {
        return Err(GreenError::BadFit { c: c.to_f64(), residual: rms.to_f64() });
    }
    Ok((c, rms))
}

