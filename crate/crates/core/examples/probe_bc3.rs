use gz4::exact::qseries::QSeries;
use gz4::exact::zpoly::QPoly;
use gz4::periods::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

fn q(n: i64) -> BigRational { BigRational::from(BigInt::from(n)) }

// find P,Q deg<=d with B*Q = A*P through `ord` coeffs; return Some((p,q))
fn prefactor(a: &QSeries, b: &QSeries, d: usize, ord: usize) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
    let unknowns = 2 * (d + 1);
    // rows: coeff k of B*Q - A*P = 0, k = 0..ord
    let mut rows: Vec<Vec<BigRational>> = vec![];
    for k in 0..ord {
        let mut row = vec![BigRational::zero(); unknowns];
        for j in 0..=d {
            if k >= j {
                row[j] = b.coeff(k - j);
                row[d + 1 + j] = -a.coeff(k - j);
            }
        }
        rows.push(row);
    }
    // gaussian elimination, find nullspace vector
    let mut piv_cols = vec![];
    let mut r = 0;
    for c in 0..unknowns {
        let mut sel = None;
        for i in r..rows.len() {
            if !rows[i][c].is_zero() { sel = Some(i); break; }
        }
        let Some(i) = sel else { continue };
        rows.swap(r, i);
        let inv = rows[r][c].recip();
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
    // free column: first non-pivot
    let free = (0..unknowns).find(|c| !piv_cols.contains(c)).unwrap();
    let mut v = vec![BigRational::zero(); unknowns];
    v[free] = BigRational::from(BigInt::from(1));
    for (ri, &pc) in piv_cols.iter().enumerate() {
        v[pc] = -rows[ri][free].clone();
    }
    let p = v[d + 1..].to_vec();
    let qv = v[..=d].to_vec();
    Some((p, qv))
}

fn main() {
    let recs = gz4::registry::default_registry().unwrap();
    let get = |id: &str| match &recs.iter().find(|r| r.id == id).unwrap().phi {
        gz4::registry::PhiEntry::Explicit(p, _) => p.clone(),
        _ => panic!(),
    };
    let n = 36;
    let fermi = period_sequence(&get("3-27"), 2 * n);
    let a: Vec<BigRational> = fermi.terms.iter().step_by(2)
        .map(|x| BigRational::from(x.clone())).collect();
    let fa = QSeries::new(a, n);
    let verrill = period_sequence(&get("4-1"), n - 1);
    let fb = QSeries::new(verrill.terms.iter().map(|x| BigRational::from(x.clone())).collect(), n);
    let apery = period_sequence(&get("6,1"), n - 1);
    println!("6,1 terms: {:?}", &apery.terms[..6]);
    let fc = QSeries::new(apery.terms.iter().map(|x| BigRational::from(x.clone())).collect(), n);
    // (6,1) via t/(t+1)^2 from the even-Fermi source
    for (nm, num, den) in [
        ("t/(t+1)^2", QPoly::new(vec![q(0), q(1)]), QPoly::new(vec![q(1), q(2), q(1)])),
        ("t/(1-t)^2", QPoly::new(vec![q(0), q(1)]), QPoly::new(vec![q(1), q(-2), q(1)])),
        ("-t/(1-t)^2", QPoly::new(vec![q(0), q(-1)]), QPoly::new(vec![q(1), q(-2), q(1)])),
        ("-t/(1+t)^2", QPoly::new(vec![q(0), q(-1)]), QPoly::new(vec![q(1), q(2), q(1)])),
    ] {
        let m = BasechangeMap::new(num, den).unwrap();
        let fam = fa.compose(&m.to_series(n));
        for d in 1..=3usize {
            if let Some((p, qv)) = prefactor(&fam, &fc, d, n - 2) {
                println!("(6,1) {} deg {}: P={:?} Q={:?}", nm, d, p, qv);
                break;
            }
            if d == 3 { println!("(6,1) {}: none", nm); }
        }
    }
}
