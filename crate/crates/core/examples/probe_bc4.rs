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
    let n = 26;
    let fermi = period_sequence(&get("3-27"), 2 * n + 4);
    let even: Vec<BigInt> = fermi.terms.iter().step_by(2).cloned().collect();
    let seq_a = PeriodSequence { terms: even };
    let op_a = rec_to_ode(&find_recurrence(&seq_a, 4, 6).unwrap()).unwrap();
    let fr_a = frobenius_solutions(&op_a, n).unwrap();
    let mm_a = mirror_map(&fr_a); // t_A(q)

    let verrill = period_sequence(&get("4-1"), n + 4);
    let op_b = rec_to_ode(&find_recurrence(&verrill, 4, 6).unwrap()).unwrap();
    let fr_b = frobenius_solutions(&op_b, n).unwrap();
    let mm_b = mirror_map(&fr_b); // t_B(q), q_B(t)

    for (lbl, sign) in [("q", 1i64), ("-q", -1i64)] {
        // t_A as series in q, with q -> sign*q, composed with q_B(t_B)
        let ta = QSeries::new(
            mm_a.t_of_q.coeffs.iter().enumerate()
                .map(|(k, c)| if sign < 0 && k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(), n);
        let m = ta.compose(&mm_b.q_of_t); // M(t_B) = t_A
        println!("{}: M = {:?}", lbl, &m.coeffs[..8.min(m.coeffs.len())]);
        // rational reconstruction: M*Q = P, deg <= 3
        for d in 1..=3usize {
            let one = QSeries::one(n);
            let _ = one;
            // solve sum_j q_j M(t) t^j - sum_j p_j t^j = 0
            let unknowns = 2 * (d + 1);
            let mut rows: Vec<Vec<BigRational>> = vec![];
            for k in 0..n - 1 {
                let mut row = vec![BigRational::zero(); unknowns];
                for j in 0..=d {
                    if k >= j {
                        row[j] = m.coeff(k - j);
                    }
                    if k == j {
                        row[d + 1 + j] = -BigRational::from(BigInt::from(1));
                    }
                }
                rows.push(row);
            }
            if let Some(v) = nullvec(&mut rows, unknowns) {
                println!("  deg {}: Q={:?} P={:?}", d, &v[..=d], &v[d + 1..]);
                break;
            }
        }
    }
}

fn nullvec(rows: &mut Vec<Vec<BigRational>>, unknowns: usize) -> Option<Vec<BigRational>> {
    let mut piv_cols = vec![];
    let mut r = 0;
    for c in 0..unknowns {
        let mut sel = None;
        for i in r..rows.len() {
            if !rows[i][c].is_zero() { sel = Some(i); break; }
        }
        let Some(i) = sel else { continue };
        rows.swap(r, i);
        let inv = rows[r][c].clone().recip();
        for x in rows[r].iter_mut() { *x *= &inv; }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..unknowns {
                    let s = rows[r][j].clone() * &f;
                    rows[i][j] -= s;
                }
            }
        }
        piv_cols.push(c);
        r += 1;
        if r == rows.len() { break; }
    }
    if piv_cols.len() == unknowns { return None; }
    let free = (0..unknowns).find(|c| !piv_cols.contains(c)).unwrap();
    let mut v = vec![BigRational::zero(); unknowns];
    v[free] = BigRational::from(BigInt::from(1));
    for (ri, &pc) in piv_cols.iter().enumerate() {
        v[pc] = -rows[ri][free].clone();
    }
    Some(v)
}
