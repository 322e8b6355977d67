use super::*;
use crate::bits_for_digits;
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Float;

fn z(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn lll_short_vector_2d() {
    // basis ((201, 37), (1648, 297)), determinant -1279; Gauss reduction
    // by hand gives shortest vector +-(1, 32) with norm^2 = 1025.
    let lat = IntegerLattice::new(vec![vec![z(201), z(37)], vec![z(1648), z(297)]]);
    let red = lll_reduce(&lat);
    let min_norm2: BigInt = red
        .basis
        .iter()
        .map(|r| dot(r, r))
        .min()
        .unwrap();
    assert_eq!(min_norm2, z(1025), "min norm^2 = {min_norm2}");
    // the lattice itself must be unchanged
    assert_eq!(lat.hnf(), red.hnf());
}

#[test]
fn lll_preserves_lattice_span() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let n = rng.gen_range(2..=4usize);
        let basis: Vec<Vec<BigInt>> = (0..n)
            .map(|_| (0..n).map(|_| z(rng.gen_range(-50..=50i64))).collect())
            .collect();
        let lat = IntegerLattice::new(basis);
        let red = lll_reduce(&lat);
        assert_eq!(lat.hnf(), red.hnf());
    }
}

#[test]
fn hnf_examples() {
    // span of (2,0) and (1,1) is {(a,b) : a+b even}... actually it's all of
    // Z^2? (1,1) and (2,0): det = -2, index 2. HNF should be ((1,1),(0,2)).
    let h = crate::exact::linalg::hermite_normal_form(&[vec![z(2), z(0)], vec![z(1), z(1)]]);
    assert_eq!(h, vec![vec![z(1), z(1)], vec![z(0), z(2)]]);
}

#[test]
fn relation_ln6_ln2_ln3() {
    let digits = 40u32;
    let prec = bits_for_digits(digits);
    let ln2 = Float::with_val(prec, 2).ln();
    let ln3 = Float::with_val(prec, 3).ln();
    let ln6 = Float::with_val(prec, 6).ln();
    let rel = integer_relation(&[ln6.clone(), ln2.clone(), ln3.clone()], digits)
        .unwrap()
        .expect("relation must be found");
    // up to sign, must be (1, -1, -1)
    assert_eq!(rel, vec![z(1), z(-1), z(-1)], "got {rel:?}");
}

#[test]
fn relation_golden_ratio() {
    // phi^2 = phi + 1 -> 1*1 + 1*phi - 1*phi^2 = 0
    let digits = 40u32;
    let prec = bits_for_digits(digits);
    let phi = (Float::with_val(prec, 5).sqrt() + 1u32) / 2u32;
    let one = Float::with_val(prec, 1);
    let phi2 = phi.clone() * &phi;
    let rel = integer_relation(&[one, phi.clone(), phi2], digits)
        .unwrap()
        .expect("relation must be found");
    assert_eq!(rel, vec![z(1), z(1), z(-1)], "got {rel:?}");
}

#[test]
fn no_relation_for_random_logs() {
    // ln 2, ln 3, ln 5 are linearly independent over Q; small-height search
    // must come back empty.
    let digits = 40u32;
    let prec = bits_for_digits(digits);
    let xs = [
        Float::with_val(prec, 2).ln(),
        Float::with_val(prec, 3).ln(),
        Float::with_val(prec, 5).ln(),
    ];
    let rel = integer_relation(&xs, digits).unwrap();
    if let Some(v) = rel {
        // any "relation" found must actually hold to working precision,
        // which is impossible here with bounded coefficients
        panic!("spurious relation {v:?}");
    }
}

#[test]
fn precision_too_low_is_reported() {
    let prec = bits_for_digits(30u32);
    let x = Float::with_val(prec, 2).ln();
    assert!(matches!(
        integer_relation(&[x.clone()], 10),
        Err(RecognizeError::PrecisionTooLow(10))
    ));
    assert!(matches!(
        algdep(&x, 3, 15),
        Err(RecognizeError::PrecisionTooLow(15))
    ));
    assert!(matches!(
        recognize_log_value(&x, 3, 12),
        Err(RecognizeError::PrecisionTooLow(12))
    ));
}

#[test]
fn algdep_cube_root_of_two() {
    let digits = 40u32;
    let prec = bits_for_digits(digits);
    let x = Float::with_val(prec, 2).root(3);
    let p = algdep(&x, 4, digits).unwrap().expect("minpoly expected");
    assert_eq!(p, crate::exact::ZPoly::from_i64(&[-2, 0, 0, 1]), "got {p}");
}

#[test]
fn algdep_rational_and_quadratic() {
    let digits = 40u32;
    let prec = bits_for_digits(digits);
    // 7/3 -> 3t - 7
    let x = Float::with_val(prec, 7) / Float::with_val(prec, 3);
    let p = algdep(&x, 4, digits).unwrap().expect("minpoly expected");
    assert_eq!(p, crate::exact::ZPoly::from_i64(&[-7, 3]));
    // 1 + sqrt(2) -> t^2 - 2t - 1
    let y = Float::with_val(prec, 2).sqrt() + 1u32;
    let p = algdep(&y, 4, digits).unwrap().expect("minpoly expected");
    assert_eq!(p, crate::exact::ZPoly::from_i64(&[-1, -2, 1]));
}

#[test]
fn algdep_rejects_pi_and_e() {
    let digits = 40u32;
    let prec = bits_for_digits(digits);
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let e = Float::with_val(prec, 1).exp();
    assert!(algdep(&pi, 4, digits).unwrap().is_none());
    assert!(algdep(&e, 4, digits).unwrap().is_none());
}

#[test]
fn recognize_3ln2() {
    let digits = 40u32;
    let prec = bits_for_digits(digits);
    let w = Float::with_val(prec, 2).ln() * 3u32;
    let rep = recognize_log_value(&w, 4, digits).unwrap();
    assert_eq!(rep.status, RecognitionStatus::Recognized);
    assert!(rep.confidence < 1e-5);
    let c = rep.candidate.unwrap();
    // w = r * ln(alpha); whichever (r, alpha) is found first, the exact
    // value r * ln(alpha) must equal 3 ln 2, i.e. alpha^(1/r) = 8.
    let check = Float::with_val(prec, c.alpha_approx).ln()
        * rational_to_big_float(&c.r, prec);
    let diff = (check - &w).abs();
    assert!(diff.to_f64() < 1e-25, "diff = {diff}");
}

#[test]
fn recognize_half_ln_quadratic_unit() {
    // w = (1/2) ln(17 + 12 sqrt(2)); alpha = 17 + 12 sqrt 2 is a root of
    // t^2 - 34 t + 1.
    let digits = 50u32;
    let prec = bits_for_digits(digits);
    let alpha = Float::with_val(prec, 2).sqrt() * 12u32 + 17u32;
    let w = alpha.ln() / 2u32;
    let rep = recognize_log_value(&w, 4, digits).unwrap();
    assert_eq!(rep.status, RecognitionStatus::Recognized);
    let c = rep.candidate.unwrap();
    let check = Float::with_val(prec, 17) + Float::with_val(prec, 2).sqrt() * 12u32;
    let back = check.ln() / 2u32;
    let diff = (back - &w).abs();
    assert!(diff.to_f64() < 1e-30);
    assert!(c.residual < 1e-30);
}

#[test]
fn recognize_round_trip_synthetic() {
    // 100 synthetic values r * ln(alpha) with alpha a root of a random
    // integer polynomial of degree <= 4 and height <= 50: all must be
    // recognized with tiny residual.
    let digits = 60u32;
    let prec = bits_for_digits(digits);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let scales = scale_candidates();
    let mut done = 0;
    while done < 100 {
        let deg = rng.gen_range(1..=4usize);
        let mut cs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-50..=50i64)).collect();
        if cs[deg] == 0 {
            cs[deg] = 1;
        }
        let p = crate::exact::ZPoly::new(cs.iter().map(|&c| BigInt::from(c)).collect());
        if p.degree() < 1 {
            continue;
        }
        // pick a real root > 1 if one exists (so ln(alpha) is well away
        // from 0)
        let roots = crate::exact::roots::isolate_real_roots(
            &p.squarefree_part(),
            &num_rational::BigRational::new(BigInt::from(1), BigInt::from(10_000_000_000i64)),
        );
        let Some((lo, hi)) = roots.iter().find(|(lo, _)| {
            *lo > num_rational::BigRational::new(BigInt::from(11), BigInt::from(10))
        }) else {
            continue;
        };
        let mid = (lo + hi) / num_rational::BigRational::from(BigInt::from(2));
        let alpha0 = rational_to_big_float(&mid, prec);
        let alpha = newton_refine(&p, &alpha0, prec);
        if alpha <= 1 {
            continue;
        }
        let r = &scales[rng.gen_range(0..scales.len())];
        let w = alpha.clone().ln() * rational_to_big_float(r, prec);
        let rep = recognize_log_value(&w, 4, digits).unwrap();
        assert_eq!(
            rep.status,
            RecognitionStatus::Recognized,
            "failed on p = {p}, r = {r}, alpha = {alpha}"
        );
        let c = rep.candidate.unwrap();
        // verify exactness: recompute w from the recognized data
        let root = newton_refine(
            &c.alpha_minpoly,
            &Float::with_val(prec, c.alpha_approx),
            prec,
        );
        let back = root.ln() * rational_to_big_float(&c.r, prec);
        let diff = (back - &w).abs().to_f64();
        assert!(diff < 1e-40, "diff = {diff} on p = {p}");
        done += 1;
    }
}

#[test]
fn recognize_no_false_positives() {
    // 100 random reals (uniform mantissas in [0.5, 4)) must all come back
    // inconclusive.
    let digits = 40u32;
    let prec = bits_for_digits(digits);
    let mut rng = ChaCha8Rng::seed_from_u64(4096);
    for i in 0..100 {
        // build a random float with full-precision mantissa so it is not
        // accidentally algebraic of small height
        let mut w = Float::with_val(prec, 0);
        let mut scale = Float::with_val(prec, 1);
        for _ in 0..5 {
            w += Float::with_val(prec, rng.gen_range(0.5f64..4.0)) * &scale;
            scale /= Float::with_val(prec, 1u64 << 52);
        }
        let rep = recognize_log_value(&w, 4, digits).unwrap();
        assert_eq!(
            rep.status,
            RecognitionStatus::Inconclusive,
            "false positive #{i} on w = {w}: {:?}",
            rep.candidate
        );
    }
}
