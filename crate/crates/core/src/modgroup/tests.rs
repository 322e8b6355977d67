use super::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Float;

const P: u32 = 128;

fn pt(x: f64, y: f64) -> PointH {
    PointH::from_f64(x, y, P)
}

fn close(a: &R, b: f64, tol: f64) -> bool {
    (a.to_f64() - b).abs() < tol
}

#[test]
fn moebius_examples() {
    let t = ProjectiveMatrix::new(1, 1, 0, 1).unwrap();
    let i = pt(0.0, 1.0);
    let r = moebius_apply(&t, &i);
    assert!(close(&r.x, 1.0, 1e-30) && close(&r.y, 1.0, 1e-30));

    let w2 = fricke(2);
    let r = moebius_apply(&w2, &i);
    assert!(close(&r.x, 0.0, 1e-30) && close(&r.y, 0.5, 1e-30));

    let fx = pt(0.0, 1.0 / 2f64.sqrt());
    let r = moebius_apply(&w2, &fx);
    assert!(close(&r.x, 0.0, 1e-12) && close(&r.y, 1.0 / 2f64.sqrt(), 1e-12));
}

#[test]
fn membership_examples() {
    let g6 = GroupSpec::gamma0(6);
    assert!(is_member(&ProjectiveMatrix::new(1, 0, 6, 1).unwrap(), &g6).unwrap());
    assert!(!is_member(&ProjectiveMatrix::new(1, 0, 3, 1).unwrap(), &g6).unwrap());
    let w2 = fricke(2);
    assert_eq!(
        is_member(&w2, &GroupSpec::gamma0(2)),
        Err(ModError::NonUnitDeterminant(2))
    );

    let gt8 = GroupSpec::parse_label("conj[1,-1,2,-1]:G0(8)+4").unwrap();
    let t = ProjectiveMatrix::new(1, 1, 0, 1).unwrap();
    let g = conjugate(&t, &gt8.conjugator).unwrap();
    assert!(is_member(&g, &gt8).unwrap());
}

#[test]
fn fricke_examples() {
    assert_eq!(fricke(2), ProjectiveMatrix::new(0, 1, -2, 0).unwrap());
    assert_eq!(fricke(2).det(), 2);
    assert_eq!(fricke(1), ProjectiveMatrix::new(0, 1, -1, 0).unwrap());
    for n in 1..=12 {
        assert!(fricke(n).mul(&fricke(n)).is_identity());
    }
}

#[test]
fn conjugate_beta3() {
    let c = QMat2::from_i64(1, 0, -3, 1);
    let b3 = conjugate(&fricke(3), &c).unwrap();
    assert_eq!(b3, ProjectiveMatrix::new(3, -1, 12, -3).unwrap());
    assert_eq!(b3.det(), 3);
    assert!(b3.mul(&b3).is_identity());
    let g = ProjectiveMatrix::new(5, 2, 12, 5).unwrap();
    assert_eq!(conjugate(&g, &QMat2::identity()).unwrap(), g);
}

#[test]
fn fixed_point_examples() {
    for n in [2i64, 3, 5, 7] {
        let f = fixed_point(&fricke(n as u64)).unwrap();
        assert_eq!((f.a, f.b, f.c), (n, 0, 1));
        assert_eq!(f.disc(), -4 * n);
    }
    let b3 = ProjectiveMatrix::new(3, -1, 12, -3).unwrap();
    let f = fixed_point(&b3).unwrap();
    assert_eq!((f.a, f.b, f.c), (12, -6, 1));
    assert_eq!(f.disc(), -12);
    let tau = f.tau(P);
    assert!(close(&tau.x, 0.25, 1e-30));
    assert!(close(&tau.y, 3f64.sqrt() / 12.0, 1e-12));

    let parabolic = ProjectiveMatrix::new(1, 1, 0, 1).unwrap();
    assert_eq!(fixed_point(&parabolic), Err(ModError::NotElliptic));
}

fn brute_force_near(n: u64, tau: &PointH, sigma: &PointH, u: &R) -> Vec<ProjectiveMatrix> {
    let mut out = BTreeSet::new();
    let r = 10i64;
    for a in -r..=r {
        for b in -r..=r {
            for c in (-r..=r).filter(|c| c.rem_euclid(n as i64) == 0) {
                for d in -r..=r {
                    if a * d - b * c != 1 {
                        continue;
                    }
                    let g = ProjectiveMatrix::new(a, b, c, d).unwrap();
                    if point_pair_invariant(tau, &moebius_apply(&g, sigma)) <= *u {
                        let k = g.enum_key();
                        out.insert((k.0, k.1, k.2, k.3, k.4, g));
                    }
                }
            }
        }
    }
    out.into_iter().map(|t| t.5).collect()
}

#[test]
fn enumerate_near_small_window() {
    let g1 = GroupSpec::gamma0(1);
    let p = pt(0.0, 2.0);
    // u(2i, 2i + b) = 1 + b^2/8, so U = 1.1 sees only the identity and
    // U = 1.5 adds exactly the translations by -2..2.
    let got = enumerate_near(&g1, &p, &p, &Float::with_val(P, 1.1));
    assert_eq!(got, vec![ProjectiveMatrix::identity()]);
    let got = enumerate_near(&g1, &p, &p, &Float::with_val(P, 1.5));
    let want: Vec<ProjectiveMatrix> = (-2..=2)
        .map(|b| ProjectiveMatrix::new(1, b, 0, 1).unwrap())
        .collect();
    assert_eq!(got, want);
}

#[test]
fn enumerate_near_matches_brute_force() {
    for n in [1u64, 2, 3] {
        let spec = GroupSpec::gamma0(n);
        for (tau, sigma, u) in [
            (pt(0.1, 1.1), pt(-0.2, 1.4), 2.5),
            (pt(0.3, 0.9), pt(0.3, 0.9), 3.0),
            (pt(-0.4, 1.8), pt(0.2, 1.0), 4.0),
        ] {
            let uu = Float::with_val(P, u);
            let got = enumerate_near(&spec, &tau, &sigma, &uu);
            let want = brute_force_near(n, &tau, &sigma, &uu);
            assert_eq!(got, want, "N={} u={}", n, u);
            // postcondition replay
            for g in &got {
                assert!(is_member(g, &spec).unwrap());
                assert!(point_pair_invariant(&tau, &moebius_apply(g, &sigma)) <= uu);
            }
        }
    }
}

#[test]
fn enumerate_near_monotone_in_u() {
    let spec = GroupSpec::gamma0(2);
    let tau = pt(0.1, 1.2);
    let sigma = pt(-0.3, 0.8);
    let mut prev = 0;
    for u in [1.5, 2.0, 3.0, 5.0, 8.0] {
        let got = enumerate_near(&spec, &tau, &sigma, &Float::with_val(P, u));
        assert!(got.len() >= prev);
        prev = got.len();
    }
}

#[test]
fn hecke_coset_examples() {
    assert_eq!(hecke_cosets(1, 5).unwrap(), vec![ProjectiveMatrix::identity()]);
    let m2 = hecke_cosets(2, 1).unwrap();
    assert_eq!(
        m2,
        vec![
            ProjectiveMatrix::new(1, 0, 0, 2).unwrap(),
            ProjectiveMatrix::new(1, 1, 0, 2).unwrap(),
            ProjectiveMatrix::new(2, 0, 0, 1).unwrap(),
        ]
    );
    assert_eq!(hecke_cosets(3, 1).unwrap().len(), 4);
    assert_eq!(hecke_cosets(2, 2), Err(ModError::NotCoprime(2, 2)));
}

/// g lies in Gamma_0(N) * rep iff g * adj(rep) / m is integral, det 1,
/// and has lower-left divisible by N.
fn in_coset(g: (i64, i64, i64, i64), rep: &ProjectiveMatrix, m: i64, n: i64) -> bool {
    let (a, b, c, d) = g;
    let (ra, rb, rc, rd) = (rep.d, -rep.b, -rep.c, rep.a);
    let e = [
        a * ra + b * rc,
        a * rb + b * rd,
        c * ra + d * rc,
        c * rb + d * rd,
    ];
    if e.iter().any(|x| x % m != 0) {
        return false;
    }
    let e: Vec<i64> = e.iter().map(|x| x / m).collect();
    e[0] * e[3] - e[1] * e[2] == 1 && e[2].rem_euclid(n) == 0
}

#[test]
fn hecke_cosets_cover_det_m_matrices() {
    for m in [2i64, 3, 5] {
        for n in [1i64, 2, 3] {
            if (m as u64).gcd(&(n as u64)) != 1 {
                continue;
            }
            let reps = hecke_cosets(m as u64, n as u64).unwrap();
            let r = 12i64;
            for a in -r..=r {
                for b in -r..=r {
                    for c in (-r..=r).filter(|c| c.rem_euclid(n) == 0) {
                        for d in -r..=r {
                            if a * d - b * c != m {
                                continue;
                            }
                            let hits = reps
                                .iter()
                                .filter(|rep| in_coset((a, b, c, d), rep, m, n))
                                .count();
                            assert_eq!(hits, 1, "({} {}; {} {}) m={} N={}", a, b, c, d, m, n);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn cm_points_examples() {
    let g1 = GroupSpec::gamma0(1);
    let pts = cm_points(&g1, 4);
    assert!(pts.contains(&CMPoint { a: 1, b: 0, c: 1 }));
    let g2 = GroupSpec::gamma0(2);
    let pts = cm_points(&g2, 8);
    assert!(pts.contains(&CMPoint { a: 2, b: 0, c: 1 }));
    for f in &pts {
        assert!(f.disc() >= -8 && f.disc() < 0);
        assert_eq!(f.a.rem_euclid(2), 0);
        assert_eq!(gcd4(f.a, f.b, f.c, 0), 1);
    }
}

#[test]
fn reduce_sl2_examples() {
    let (p, g) = reduce_sl2(&pt(0.5, 2.0));
    assert!(close(&p.x, -0.5, 1e-20) && close(&p.y, 2.0, 1e-20));
    assert_eq!(g, ProjectiveMatrix::new(1, -1, 0, 1).unwrap());

    let start = pt(0.1, 0.1);
    let (p, g) = reduce_sl2(&start);
    assert!(p.y.to_f64() >= 3f64.sqrt() / 2.0 - 1e-12);
    assert!(p.x.to_f64().abs() <= 0.5 + 1e-12);
    // g . start = p
    let moved = moebius_apply(&g, &start);
    assert!(close(&moved.x, p.x.to_f64(), 1e-20));
    assert!(close(&moved.y, p.y.to_f64(), 1e-20));

    let already = pt(0.2, 1.5);
    let (p, g) = reduce_sl2(&already);
    assert!(g.is_identity());
    assert!(close(&p.x, 0.2, 1e-30));
}

#[test]
fn moebius_composition_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let spec = GroupSpec::gamma0(3);
    let tau = pt(0.17, 0.83);
    for _ in 0..1000 {
        let g = spec.random_element(&mut rng, 8);
        let h = spec.random_element(&mut rng, 8);
        let lhs = moebius_apply(&g.mul(&h), &tau);
        let rhs = moebius_apply(&g, &moebius_apply(&h, &tau));
        assert!(close(&lhs.x, rhs.x.to_f64(), 1e-18));
        assert!(close(&lhs.y, rhs.y.to_f64(), 1e-18));
    }
}

#[test]
fn group_labels_parse_and_normalize() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for label in ["G0(2)+2", "G0(3)+3", "G0(6)+3", "G0(6)+6+3", "conj[1,-1,2,-1]:G0(8)+4"] {
        let spec = GroupSpec::parse_label(label).unwrap();
        assert!(!spec.atkin_lehner.is_empty());
        for w in &spec.atkin_lehner {
            assert!(w.mul(w).is_identity());
            for _ in 0..100 {
                let gamma = spec.random_element(&mut rng, 10);
                let conj = w.conj_pm(&gamma);
                assert!(is_member(&conj, &spec).unwrap(), "{}: {} fails for {}", label, w, gamma);
            }
        }
    }
}

#[test]
fn label_only_groups_rejected() {
    for label in ["G0(15)+15+5", "G0(10)+10+5", "G0(14)+14+7", "(8A1)+2", "(12F1)+6+3"] {
        match GroupSpec::parse_label(label) {
            Err(ModError::LabelOnly(_)) => {}
            other => panic!("{}: expected LabelOnly, got {:?}", label, other),
        }
    }
    assert!(matches!(
        GroupSpec::parse_label("G0(x)"),
        Err(ModError::ParseError(_))
    ));
}

#[test]
fn point_pair_invariant_examples() {
    let i = pt(0.0, 1.0);
    assert!(close(&point_pair_invariant(&i, &i), 1.0, 1e-30));
    let i2 = pt(0.0, 2.0);
    assert!(close(&point_pair_invariant(&i, &i2), 1.25, 1e-30));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = GroupSpec::gamma0(1);
    let a = pt(0.3, 1.7);
    let b = pt(-0.6, 0.4);
    let u0 = point_pair_invariant(&a, &b).to_f64();
    for _ in 0..100 {
        let g = spec.random_element(&mut rng, 8);
        let u = point_pair_invariant(&moebius_apply(&g, &a), &moebius_apply(&g, &b));
        assert!(close(&u, u0, 1e-15));
    }
}
