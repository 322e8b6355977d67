use gz4::exact::qseries::QSeries;
use gz4::periods::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

fn main() {
    let recs = gz4::registry::default_registry().unwrap();
    let get = |id: &str| match &recs.iter().find(|r| r.id == id).unwrap().phi {
        gz4::registry::PhiEntry::Explicit(p, _) => p.clone(),
        _ => panic!(),
    };
    let n = 24;
    let fermi = period_sequence(&get("3-27"), 2 * n + 4);
    let even: Vec<BigInt> = fermi.terms.iter().step_by(2).cloned().collect();
    let seq_a = PeriodSequence { terms: even.clone() };
    let op_a = rec_to_ode(&find_recurrence(&seq_a, 4, 6).unwrap()).unwrap();
    let fr_a = frobenius_solutions(&op_a, n).unwrap();
    let mm_a = mirror_map(&fr_a);
    let fa = QSeries::new(even.iter().map(|x| BigRational::from(x.clone())).collect(), n);

    let verrill = period_sequence(&get("4-1"), n + 4);
    let op_b = rec_to_ode(&find_recurrence(&verrill, 4, 6).unwrap()).unwrap();
    let fr_b = frobenius_solutions(&op_b, n).unwrap();
    let mm_b = mirror_map(&fr_b);
    let fb = QSeries::new(verrill.terms.iter().map(|x| BigRational::from(x.clone())).collect(), n);

    // u(q) = F_B(t_B(q)); v(q) = F_A(t_A(-q)); ratio in q, then in t_B
    let u = fb.compose(&mm_b.t_of_q);
    let ta_negq = QSeries::new(
        mm_a.t_of_q.coeffs.iter().enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() }).collect(), n);
    let v = fa.compose(&ta_negq);
    let ratio_q = u.mul(&v.inverse());
    let ratio_t = ratio_q.compose(&mm_b.q_of_t);
    println!("ratio in t_B: {:?}", &ratio_t.coeffs[..10]);
}
