//! Real root isolation and refinement for integer polynomials, using Sturm
//! sequences and rational bisection.

use super::zpoly::{QPoly, ZPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn sturm_chain(p: &ZPoly) -> Vec<QPoly> {
    let mut chain = vec![p.to_qpoly(), p.derivative().to_qpoly()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&-BigRational::one()));
    }
    chain
}

fn sign_changes(chain: &[QPoly], x: &BigRational) -> usize {
    let mut prev = 0i8;
    let mut changes = 0;
    for q in chain {
        let v = q.eval(x);
        let s = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if prev != 0 && s != prev {
                changes += 1;
            }
            prev = s;
        }
    }
    changes
}

/// Cauchy bound on the magnitude of real roots.
pub fn root_bound(p: &ZPoly) -> BigRational {
    let lead = p.leading().abs();
    let mut m = BigInt::zero();
    for c in &p.coeffs {
        let a = c.abs();
        if a > m {
            m = a;
        }
    }
    BigRational::one() + BigRational::new(m, lead)
}

/// Isolate all real roots of a squarefree integer polynomial. Returns
/// disjoint intervals (lo, hi), one per root, each refined to width <= eps.
pub fn isolate_real_roots(p: &ZPoly, eps: &BigRational) -> Vec<(BigRational, BigRational)> {
    if p.is_zero() || p.degree() == 0 {
        return vec![];
    }
    let chain = sturm_chain(p);
    let b = root_bound(p);
    let lo = -b.clone();
    let hi = b;
    let total = {
        let a = sign_changes(&chain, &lo);
        let c = sign_changes(&chain, &hi);
        a.saturating_sub(c)
    };
    let mut out = vec![];
    let mut stack = vec![(lo, hi, total)];
    while let Some((a, c, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 && (&c - &a) <= *eps {
            out.push((a, c));
            continue;
        }
        let mid = (&a + &c) / BigRational::from_integer(BigInt::from(2));
        // nudge off an exact root so interval endpoints stay regular
        let mid = if p.eval_q(&mid).is_zero() {
            &mid + (&c - &a) / BigRational::from_integer(BigInt::from(1024))
        } else {
            mid
        };
        let va = sign_changes(&chain, &a);
        let vm = sign_changes(&chain, &mid);
        let vc = sign_changes(&chain, &c);
        stack.push((a, mid.clone(), va.saturating_sub(vm)));
        stack.push((mid, c, vm.saturating_sub(vc)));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Refine an isolating interval by bisection until its width is <= eps.
/// The polynomial must change sign across the interval.
pub fn refine_root(p: &ZPoly, lo: &BigRational, hi: &BigRational, eps: &BigRational) -> (BigRational, BigRational) {
    let mut a = lo.clone();
    let mut c = hi.clone();
    let fa = p.eval_q(&a);
    if fa.is_zero() {
        return (a.clone(), a);
    }
    let sa = fa.is_positive();
    while (&c - &a) > *eps {
        let mid = (&a + &c) / BigRational::from_integer(BigInt::from(2));
        let fm = p.eval_q(&mid);
        if fm.is_zero() {
            return (mid.clone(), mid);
        }
        if fm.is_positive() == sa {
            a = mid;
        } else {
            c = mid;
        }
    }
    (a, c)
}

/// Count distinct real roots of a squarefree integer polynomial.
pub fn count_real_roots(p: &ZPoly) -> usize {
    if p.is_zero() || p.degree() == 0 {
        return 0;
    }
    let chain = sturm_chain(p);
    let b = root_bound(p);
    sign_changes(&chain, &-b.clone()).saturating_sub(sign_changes(&chain, &b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow10(k: u32) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(10u32).pow(k))
    }

    #[test]
    fn quadratic_roots() {
        // t^2 - 34t + 1, roots 17 +- 12*sqrt(2)
        let p = ZPoly::from_i64(&[1, -34, 1]);
        assert_eq!(count_real_roots(&p), 2);
        let eps = pow10(22);
        let roots = isolate_real_roots(&p, &eps);
        assert_eq!(roots.len(), 2);
        for (lo, hi) in &roots {
            let (lo, hi) = refine_root(&p, lo, hi, &eps);
            // 17 - 12*sqrt(2) = 0.029437..., 17 + 12*sqrt(2) = 33.9705...
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            let v = p.eval_q(&mid);
            assert!(v.abs() < BigRational::new(BigInt::one(), BigInt::from(10u64).pow(18)));
        }
    }

    #[test]
    fn cubic_root_count() {
        // t^3 - 2 has one real root
        let p = ZPoly::from_i64(&[-2, 0, 0, 1]);
        assert_eq!(count_real_roots(&p), 1);
        // t^3 - t has three
        let q = ZPoly::from_i64(&[0, -1, 0, 1]);
        assert_eq!(count_real_roots(&q), 3);
    }
}
