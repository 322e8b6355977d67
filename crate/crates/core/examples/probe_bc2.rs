use gz4::exact::qseries::QSeries;
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
    let fermi = period_sequence(&get("3-27"), 40);
    let a: Vec<BigRational> = fermi.terms.iter().step_by(2)
        .map(|x| BigRational::from(x.clone())).collect();
    let fa = QSeries::new(a, 20);
    let verrill = period_sequence(&get("4-1"), 19);
    println!("4-1 terms: {:?}", &verrill.terms[..6]);
    let fb = QSeries::new(verrill.terms.iter().map(|x| BigRational::from(x.clone())).collect(), 20);
    for (nm, num, den) in [
        ("t/(8t+1)^2", QPoly::new(vec![q(0), q(1)]), QPoly::new(vec![q(1), q(16), q(64)])),
        ("t/(1-8t)^2", QPoly::new(vec![q(0), q(1)]), QPoly::new(vec![q(1), q(-16), q(64)])),
        ("-36t/(8t+1)^2", QPoly::new(vec![q(0), q(-36)]), QPoly::new(vec![q(1), q(16), q(64)])),
        ("-36t/(1-8t)^2", QPoly::new(vec![q(0), q(-36)]), QPoly::new(vec![q(1), q(-16), q(64)])),
    ] {
        let m = BasechangeMap::new(num, den).unwrap();
        let fam = fa.compose(&m.to_series(20));
        let ratio = fb.mul(&fam.inverse());
        println!("{}: F_B/(F_A o m) coeffs = {:?}", nm, &ratio.coeffs[..7]);
    }
}
