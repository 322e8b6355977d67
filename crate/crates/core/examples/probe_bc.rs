use gz4::exact::zpoly::QPoly;
use gz4::periods::*;
use num_bigint::BigInt;
use num_rational::BigRational;

fn q(n: i64) -> BigRational { BigRational::from(BigInt::from(n)) }

fn main() {
    let recs = gz4::registry::default_registry().unwrap();
    let get = |id: &str| match &recs.iter().find(|r| r.id == id).unwrap().phi {
        gz4::registry::PhiEntry::Explicit(p, _) => p.clone(),
        _ => panic!(),
    };
    let fermi = period_sequence(&get("3-27"), 70);
    // odd terms vanish; even part is the (3-1) sequence
    assert!(fermi.terms.iter().skip(1).step_by(2).all(|t| t == &BigInt::from(0)));
    let even: Vec<BigInt> = fermi.terms.iter().step_by(2).cloned().collect();
    println!("3-1 terms: {:?}", &even[..6]);
    let seq31 = PeriodSequence { terms: even.clone() };
    let op31 = rec_to_ode(&find_recurrence(&seq31, 4, 6).unwrap()).unwrap();
    // pullback onto 3-27 via t -> t^2
    let sq = BasechangeMap::new(QPoly::new(vec![q(0), q(0), q(1)]), QPoly::one()).unwrap();
    let r1 = pullback_check(&op31, &sq, &fermi.terms, 25).unwrap();
    println!("3-27 via t^2: pass={} pnum={:?} pden={:?}", r1.pass, r1.p_num.coeffs, r1.p_den.coeffs);
    // pullback onto 4-1 via 36t/(8t+1)^2
    let verrill = period_sequence(&get("4-1"), 30);
    let m = BasechangeMap::new(
        QPoly::new(vec![q(0), q(36)]),
        QPoly::new(vec![q(1), q(16), q(64)]),
    ).unwrap();
    let r2 = pullback_check(&op31, &m, &verrill.terms, 25).unwrap();
    println!("4-1 via 36t/(8t+1)^2: pass={} pnum={:?} pden={:?}", r2.pass, r2.p_num.coeffs, r2.p_den.coeffs);
}
