use super::sums::{
    choose_qmax, coset_sum_exact, coset_sum_f64, legendre_q1, t_sums, z_epstein, FourierWeights,
};
use super::*;
use crate::modgroup::{CMPoint, GroupSpec, PointH};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;

const P: u32 = 192;

fn fl(v: f64) -> Float {
    Float::with_val(P, v)
}

fn pt(x: f64, y: f64) -> PointH {
    PointH::new(fl(x), fl(y))
}

// ---------------------------------------------------------------------------
// legendre_q1
// ---------------------------------------------------------------------------

#[test]
fn q1_closed_form_at_three() {
    // Q_1(3) = (3/2) ln 2 - 1
    let v = legendre_q1(&fl(3.0)).unwrap();
    let expect = fl(2.0).ln() * fl(1.5) - 1u32;
    assert!((v - expect).abs() < 1e-50);
}

#[test]
fn q1_domain_error_at_or_below_one() {
    assert!(legendre_q1(&fl(1.0)).is_err());
    assert!(legendre_q1(&fl(0.5)).is_err());
    assert!(legendre_q1(&fl(-3.0)).is_err());
}

#[test]
fn q1_asymptotic_two_thirds_t_squared() {
    // Q_1(t) = 1/(3 t^2) + 1/(5 t^4) + ... for t -> infinity
    let t = fl(1e6);
    let v = legendre_q1(&t).unwrap();
    let t2 = fl(1e6).square();
    let asym = fl(3.0).recip() / &t2 + fl(5.0).recip() / t2.clone().square();
    assert!(((v.clone() - &asym) / asym).abs() < 1e-12);
}

// ---------------------------------------------------------------------------
// lattice sums: exact cotangent machinery vs brute force
// ---------------------------------------------------------------------------

#[test]
fn t_sum_m1_matches_coth_closed_form() {
    // sum_k (k^2 + C^2)^{-1} = (pi/C) coth(pi C)
    let mut up = FourierWeights::new(P);
    let c = fl(0.7);
    let got = t_sums(&fl(0.0), &c, 1, &mut up)[0].clone();
    let pi = Float::with_val(P, rug::float::Constant::Pi);
    let picoth = pi.clone() / &c * (pi.clone() * &c).cosh() / (pi * &c).sinh();
    assert!(((got.clone() - &picoth) / picoth).abs() < 1e-45);
}

#[test]
fn t_sums_match_brute_force() {
    let mut up = FourierWeights::new(P);
    let xs = [0.0f64, 0.31, -2.7, 0.5];
    let cs = [0.4f64, 1.3, 5.0, 16.0];
    for &x0 in &xs {
        for &c0 in &cs {
            let got = t_sums(&fl(x0), &fl(c0), 4, &mut up);
            for m in 2..=4usize {
                let mut brute = fl(0.0);
                let k_cap = 40000i64;
                for k in -k_cap..=k_cap {
                    let p = (fl(x0) - Float::with_val(P, k)).square() + fl(c0).square();
                    brute += p.pow(-(m as i32));
                }
                // brute-force tail < 2 * K^{1-2m} / (2m-1)
                let tail = 2.0 * (k_cap as f64).powi(1 - 2 * m as i32) / (2.0 * m as f64 - 1.0);
                let diff = (got[m - 1].clone() - brute).abs().to_f64();
                assert!(
                    diff < tail + 1e-30,
                    "m={} x={} c={} diff={:.3e} tail={:.3e}",
                    m,
                    x0,
                    c0,
                    diff,
                    tail
                );
            }
        }
    }
}

#[test]
fn coset_sum_exact_matches_brute_q1() {
    // direct: sum_k Q_1(((x-k)^2 + c^2)/b) with generous truncation
    let mut up = FourierWeights::new(P);
    let (x0, c2, b0) = (0.37f64, 7.9f64, 1.6f64);
    let got = coset_sum_exact(&fl(x0), &fl(c2), &fl(b0), &fl(1e-30), &fl(1e-40), &mut up).unwrap();
    let mut brute = fl(0.0);
    for k in -30000i64..=30000 {
        let u = ((fl(x0) - Float::with_val(P, k)).square() + fl(c2)) / fl(b0);
        brute += legendre_q1(&u).unwrap();
    }
    // Q_1(u) ~ (2/3) (b/k^2)^2 => tail ~ (2/3) b^2 * 2/(3 K^3)
    let diff = (got.value.clone() - brute).abs().to_f64();
    assert!(diff < 1e-10, "diff={:.3e}", diff);
}

#[test]
fn coset_sum_f64_agrees_with_exact_path() {
    let mut up = FourierWeights::new(P);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let x0: f64 = rng.gen_range(-3.0..3.0);
        let c2: f64 = rng.gen_range(0.1..400.0);
        // far-coset regime: u_min = c2/b well above the window threshold
        let b0: f64 = c2 / rng.gen_range(2.0e2..1.0e6);
        let exact =
            coset_sum_exact(&fl(x0), &fl(c2), &fl(b0), &fl(1e-30), &fl(1e-45), &mut up).unwrap();
        let fast = coset_sum_f64(x0, c2, b0);
        let scale = exact.value.to_f64().abs().max(1e-300);
        assert!(
            (exact.value.to_f64() - fast).abs() / scale < 1e-12,
            "x={} c2={} b={} exact={:e} fast={:e}",
            x0,
            c2,
            b0,
            exact.value.to_f64(),
            fast
        );
    }
}

#[test]
fn coset_sum_reports_pole_hit() {
    let mut up = FourierWeights::new(P);
    // u_min = c^2/b = 1 exactly at k = x
    let r = coset_sum_exact(&fl(0.0), &fl(2.0), &fl(2.0), &fl(1e-20), &fl(1e-40), &mut up);
    assert!(matches!(r, Err(GreenError::PoleHit)));
}

// ---------------------------------------------------------------------------
// Epstein zero-mode sums vs brute-force coset enumeration
// ---------------------------------------------------------------------------

fn z_brute(level: u64, x_s: f64, y_s: f64, s: i32, q_cap: f64) -> f64 {
    // cosets of Gamma_infinity in Gamma_0(level): bottom rows +-(c,d),
    // c > 0 (plus the identity coset), gcd(c,d)=1, level | c
    let mut total = 1.0f64;
    let mut c = level as i64;
    loop {
        let cf = c as f64;
        if (cf * y_s) * (cf * y_s) > q_cap {
            break;
        }
        let rad = (q_cap - (cf * y_s) * (cf * y_s)).sqrt();
        let d_lo = (-cf * x_s - rad).floor() as i64;
        let d_hi = (-cf * x_s + rad).ceil() as i64;
        for d in d_lo..=d_hi {
            if num_integer::gcd(c, d) != 1 {
                continue;
            }
            let lin = cf * x_s + d as f64;
            let q = lin * lin + (cf * y_s) * (cf * y_s);
            if q <= q_cap {
                total += q.powi(-s);
            }
        }
        c += level as i64;
    }
    total
}

#[test]
fn epstein_matches_brute_force() {
    let mut up = FourierWeights::new(P);
    for &(level, x_s, y_s) in &[(1u64, 0.13f64, 0.9f64), (2, -0.4, 0.7), (6, 0.22, 1.1)] {
        for s in [2usize, 3] {
            let got = z_epstein(level, &fl(x_s), &fl(y_s), s, P, &mut up).to_f64();
            let q_cap = 4.0e5;
            let brute = z_brute(level, x_s, y_s, s as i32, q_cap);
            // coset count below Q grows linearly in Q, so the brute tail
            // is O(q_cap^{1-s})
            let tol = 20.0 * q_cap.powi(1 - s as i32) / y_s;
            assert!(
                (got - brute).abs() < tol,
                "N={} s={} got={} brute={} tol={:e}",
                level,
                s,
                got,
                brute,
                tol
            );
        }
    }
}

// ---------------------------------------------------------------------------
// full evaluator: invariants
// ---------------------------------------------------------------------------

#[test]
fn reduce_gamma0_stays_in_orbit_and_raises_y() {
    let g1 = GroupSpec::gamma0(1);
    let g6 = GroupSpec::gamma0(6);
    let p = pt(3.71, 0.04);
    let r1 = reduce_gamma0(1, &p);
    assert!(r1.y.to_f64() >= p.y.to_f64());
    assert!(r1.x.to_f64().abs() <= 0.5 + 1e-12);
    assert!(orbit_equivalent(&g1, &p, &r1));
    let r6 = reduce_gamma0(6, &p);
    assert!(r6.y.to_f64() >= p.y.to_f64());
    assert!(orbit_equivalent(&g6, &p, &r6));
}

#[test]
fn green_pair_two_cutoff_consistency() {
    // doubling the cutoff must move the value by at most the error bound
    let g = GroupSpec::gamma0(2);
    let tau = pt(0.11, 1.23);
    let sigma = pt(-0.31, 0.77);
    let target = fl(1e-9);
    let q = choose_qmax(1.23, 0.77, 1e-9);
    let a = green_pair_with_cutoff(&g, &tau, &sigma, &target, Some(q)).unwrap();
    let b = green_pair_with_cutoff(&g, &tau, &sigma, &target, Some(2.0 * q)).unwrap();
    let diff = (a.value.clone() - &b.value).abs();
    assert!(
        diff <= a.error_bound,
        "diff={:e} bound={:e}",
        diff.to_f64(),
        a.error_bound.to_f64()
    );
    assert!(a.error_bound.to_f64() < 1e-9);
}

#[test]
fn green_pair_symmetry() {
    let g = GroupSpec::gamma0(3);
    let tau = pt(0.21, 1.4);
    let sigma = pt(-0.13, 0.9);
    let target = fl(1e-8);
    let a = green_pair(&g, &tau, &sigma, &target).unwrap();
    let b = green_pair(&g, &sigma, &tau, &target).unwrap();
    let tol = (a.error_bound.clone() + &b.error_bound).to_f64();
    assert!((a.value.clone() - b.value).abs().to_f64() <= tol);
}

#[test]
fn green_pair_group_invariance() {
    let g = GroupSpec::gamma0(4);
    let tau = pt(0.17, 1.1);
    let sigma = pt(0.45, 0.8);
    let target = fl(1e-8);
    let base = green_pair(&g, &tau, &sigma, &target).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let gamma = g.random_element(&mut rng, 4);
        let moved_tau = crate::modgroup::moebius_apply(&gamma, &tau);
        let a = green_pair(&g, &moved_tau, &sigma, &target).unwrap();
        let tol = (a.error_bound.clone() + &base.error_bound).to_f64();
        assert!(
            (a.value.clone() - &base.value).abs().to_f64() <= tol,
            "gamma moved value by {:e} > {:e}",
            (a.value.clone() - &base.value).abs().to_f64(),
            tol
        );
    }
}

#[test]
fn green_basic_pole_hit_at_pole() {
    let pole = CMPoint::new(1, 0, 1).unwrap(); // tau = i
    let spec = GreenSpec { group: GroupSpec::gamma0(1), pole };
    let at_pole = pt(0.0, 1.0);
    assert!(matches!(
        green_basic(&spec, &at_pole, &fl(1e-8)),
        Err(GreenError::PoleHit)
    ));
}

#[test]
fn green_pair_decays_at_the_cusp() {
    let g = GroupSpec::gamma0(1);
    let sigma = pt(0.0, 1.0);
    let target = fl(1e-8);
    let v1 = green_pair(&g, &pt(0.2, 8.0), &sigma, &target).unwrap();
    let v2 = green_pair(&g, &pt(0.2, 16.0), &sigma, &target).unwrap();
    // weight 4 (k = 2): G ~ c y^{1-k} = c/y at the cusp, so halving is expected
    let r = (v2.value.clone() / &v1.value).to_f64();
    assert!(v1.value.to_f64().abs() < 3.0);
    assert!((r - 0.5).abs() < 0.05, "decay ratio {}", r);
}

#[test]
fn green_pair_laplacian_eigenfunction() {
    let g = GroupSpec::gamma0(2);
    let sigma = pt(-0.31, 0.77);
    let tau = pt(0.11, 1.23);
    let target = fl(1e-10);
    let mut f = |p: &PointH| green_pair(&g, p, &sigma, &target);
    let res = laplacian_residual(&mut f, &tau, &fl(1e-3), 1e-3).unwrap();
    // 5-point stencil truncation is O(h^2) ~ 1e-6
    assert!(res.to_f64() < 1e-4, "residual {}", res.to_f64());
}

#[test]
fn laplacian_rejects_too_small_step() {
    let g = GroupSpec::gamma0(2);
    let sigma = pt(-0.31, 0.77);
    let tau = pt(0.11, 1.23);
    let target = fl(1e-6);
    let mut f = |p: &PointH| green_pair(&g, p, &sigma, &target);
    let r = laplacian_residual(&mut f, &tau, &fl(1e-7), 1e-9);
    assert!(matches!(r, Err(GreenError::StepTooSmall)));
}

// ---------------------------------------------------------------------------
// Hecke operators and relations
// ---------------------------------------------------------------------------

#[test]
fn hecke_translate_is_symmetric_under_adjoint() {
    // T_m is self-adjoint: (T_m G)(tau, sigma) = (T_m G)(sigma, tau) where
    // translation acts on the first variable. Check m = 2 on Gamma_0(3).
    let g = GroupSpec::gamma0(3);
    let pole = CMPoint::new(1, 1, 1).unwrap();
    let spec = GreenSpec { group: g, pole };
    let tau = pt(0.23, 1.31);
    let target = fl(1e-7);
    let r = hecke_translate(2, &spec, &tau, &target).unwrap();
    assert!(r.value.is_finite());
    // m = 2: three cosets, each a convergent sum
    assert!(r.term_count > 0);

    // against brute definition: sum over cosets of green_pair
    let g = GroupSpec::gamma0(3);
    let reps = crate::modgroup::hecke_cosets(2, 3).unwrap();
    assert_eq!(reps.len(), 3);
    let sigma = spec.pole.tau(P);
    let mut brute = fl(0.0);
    let mut bound = fl(0.0);
    for rep in &reps {
        let moved = crate::modgroup::moebius_apply(rep, &tau);
        let e = green_pair(&g, &moved, &sigma, &target).unwrap();
        brute += e.value;
        bound += e.error_bound;
    }
    let tol = (bound + &r.error_bound).to_f64();
    assert!((r.value.clone() - brute).abs().to_f64() <= tol);
}

#[test]
fn green_relation_is_linear_combination() {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let g = GroupSpec::gamma0(2);
    let pole = CMPoint::new(1, 0, 2).unwrap();
    let tau = pt(0.19, 1.05);
    let target = fl(1e-6);
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let rel = HeckeRelation::new(vec![(3, q(1, 2)), (5, q(-2, 3))], 2).unwrap();
    let combo = green_relation(&g, &rel, &pole, &tau, &target).unwrap();
    let spec = GreenSpec { group: g, pole };
    let t3 = hecke_translate(3, &spec, &tau, &target).unwrap();
    let t5 = hecke_translate(5, &spec, &tau, &target).unwrap();
    let expect = fl(1.5) * &t3.value + fl(-10.0 / 3.0) * &t5.value;
    let tol = fl(1.5) * &t3.error_bound + fl(10.0 / 3.0) * &t5.error_bound + &combo.error_bound;
    assert!((combo.value.clone() - expect).abs() <= tol);
}

#[test]
fn hecke_relation_rejects_bad_indices() {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let one = BigRational::from(BigInt::from(1));
    assert!(matches!(
        HeckeRelation::new(vec![(2, one.clone())], 4),
        Err(GreenError::NotCoprime(2, 4))
    ));
    assert!(HeckeRelation::new(vec![(3, one.clone()), (3, one)], 4).is_err());
}

#[test]
fn green_relation_empty_is_zero() {
    let g = GroupSpec::gamma0(2);
    let pole = CMPoint::new(1, 0, 2).unwrap();
    let rel = HeckeRelation { terms: vec![] };
    let r = green_relation(&g, &rel, &pole, &pt(0.1, 1.2), &fl(1e-6)).unwrap();
    assert_eq!(r.value.to_f64(), 0.0);
}

// ---------------------------------------------------------------------------
// antisymmetrization
// ---------------------------------------------------------------------------

#[test]
fn green_hat_degenerate_pole_detected() {
    // on G0(2)+2 the pole 2x^2 + y^2 (disc -8, tau = i/sqrt(2)) is fixed
    // by the Fricke involution, so the antisymmetrization vanishes
    let g = GroupSpec::parse_label("G0(2)+2").unwrap();
    let pole = CMPoint::new(2, 0, 1).unwrap();
    let r = green_hat(&g, &pole, &pt(0.3, 0.9), &fl(1e-6));
    assert!(matches!(r, Err(GreenError::DegeneratePole)), "{:?}", r.map(|e| e.value.to_f64()));
}

#[test]
fn green_hat_nondegenerate_pole_evaluates() {
    // disc -20 form (3, 2, 2) on G0(2)+2 is not Fricke-fixed
    let g = GroupSpec::parse_label("G0(2)+2").unwrap();
    let pole = CMPoint::new(3, 2, 2).unwrap();
    let r = green_hat(&g, &pole, &pt(0.1, 1.3), &fl(1e-7)).unwrap();
    assert!(r.value.is_finite());
    assert!(r.error_bound.to_f64() < 1e-6);
    // two-cutoff stability at the same aggregate target
    let r2 = green_hat(&g, &pole, &pt(0.1, 1.3), &fl(1e-9)).unwrap();
    assert!((r.value.clone() - r2.value).abs() <= r.error_bound.clone() + &r2.error_bound);
}

// ---------------------------------------------------------------------------
// pole coefficient fit
// ---------------------------------------------------------------------------

#[test]
fn pole_coefficient_recovers_synthetic_log() {
    let tau_hat = pt(0.25, 1.5);
    let th = tau_hat.clone();
    let mut f = |p: &PointH| {
        let dx = p.x.clone() - &th.x;
        let dy = p.y.clone() - &th.y;
        let r = (dx.square() + dy.square()).sqrt();
        Ok(EvalResult {
            value: fl(3.0) * r.ln() + fl(7.0),
            error_bound: fl(1e-30),
            cutoff: fl(0.0),
            term_count: 1,
        })
    };
    let (c, rms) = pole_coefficient(&mut f, &tau_hat).unwrap();
    assert!((c.to_f64() - 3.0).abs() < 1e-9, "c = {}", c.to_f64());
    assert!(rms.to_f64() < 1e-9);
}

#[test]
fn pole_coefficient_rejects_non_log_behavior() {
    let tau_hat = pt(0.25, 1.5);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut f = |_: &PointH| {
        Ok(EvalResult {
            value: fl(rng.gen_range(-1.0..1.0)),
            error_bound: fl(1e-30),
            cutoff: fl(0.0),
            term_count: 1,
        })
    };
    assert!(matches!(pole_coefficient(&mut f, &tau_hat), Err(GreenError::BadFit { .. })));
}
