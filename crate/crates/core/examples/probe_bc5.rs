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
    let even: Vec<BigInt> = fermi.terms.iter().step_by(2).cloned().collect();
    let seq_a = PeriodSequence { terms: even };
    let op_a = rec_to_ode(&find_recurrence(&seq_a, 4, 6).unwrap()).unwrap();
    let verrill = period_sequence(&get("4-1"), 30);
    let m = BasechangeMap::new(
        QPoly::new(vec![q(0), q(-1)]),
        QPoly::new(vec![q(1), q(-20), q(64)]),
    ).unwrap();
    let rep = pullback_check(&op_a, &m, &verrill.terms, 25).unwrap();
    println!("pass={} pnum={:?} pden={:?} mismatch={:?}", rep.pass, rep.p_num.coeffs, rep.p_den.coeffs, rep.first_mismatch);
}
