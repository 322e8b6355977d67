//! Exact linear algebra over Q plus a mod-p prescreen.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Right nullspace basis of an m x n rational matrix, by fraction-free-ish
/// Gaussian elimination with partial pivoting on magnitude.
pub fn nullspace_rational(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    for r in &a {
        assert_eq!(r.len(), ncols);
    }
    let m = a.len();
    let mut pivot_col_of_row = vec![usize::MAX; m];
    let mut pivot_cols = vec![];
    let mut row = 0;
    for col in 0..ncols {
        // pick the pivot with largest magnitude to keep entries tame
        let mut best: Option<usize> = None;
        for r in row..m {
            if !a[r][col].is_zero()
                && best.map_or(true, |b| a[r][col].abs() > a[b][col].abs())
            {
                best = Some(r);
            }
        }
        let Some(p) = best else { continue };
        a.swap(row, p);
        let inv = BigRational::one() / a[row][col].clone();
        for c in col..ncols {
            let v = &a[row][c] * &inv;
            a[row][c] = v;
        }
        for r in 0..m {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..ncols {
                    let t = &a[row][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
        pivot_col_of_row[row] = col;
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    let is_pivot = {
        let mut v = vec![false; ncols];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    let mut basis = vec![];
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut vec_ = vec![BigRational::zero(); ncols];
        vec_[free] = BigRational::one();
        for r in 0..row {
            let pc = pivot_col_of_row[r];
            vec_[pc] = -a[r][free].clone();
        }
        basis.push(vec_);
    }
    basis
}

/// Scale a rational vector to a primitive integer vector (cleared
/// denominators, content 1, first nonzero entry positive).
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut den = BigInt::one();
    for c in v {
        den = den.lcm(c.denom());
    }
    let mut w: Vec<BigInt> = v.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let mut g = BigInt::zero();
    for c in &w {
        g = g.gcd(c);
    }
    if !g.is_zero() {
        if let Some(first) = w.iter().find(|c| !c.is_zero()) {
            if first.is_negative() {
                g = -g;
            }
        }
        for c in &mut w {
            *c = &*c / &g;
        }
    }
    w
}

/// Row-style Hermite normal form of an integer matrix (used to compare
/// lattices for equality).
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    use num_integer::Integer;
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    if a.is_empty() {
        return a;
    }
    let ncols = a[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        // clear entries below pivot_row by gcd steps
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..a.len() {
                if !a[r][col].is_zero()
                    && best.map_or(true, |b| a[r][col].abs() < a[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(p) = best else { break };
            a.swap(pivot_row, p);
            let mut any = false;
            for r in pivot_row + 1..a.len() {
                if !a[r][col].is_zero() {
                    let q = a[r][col].div_floor(&a[pivot_row][col]);
                    for c in 0..ncols {
                        let t = &a[pivot_row][c] * &q;
                        a[r][c] -= t;
                    }
                    if !a[r][col].is_zero() {
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
        }
        if a[pivot_row][col].is_zero() {
            continue;
        }
        if a[pivot_row][col].is_negative() {
            for c in 0..ncols {
                a[pivot_row][c] = -a[pivot_row][c].clone();
            }
        }
        // reduce rows above
        for r in 0..pivot_row {
            let q = a[r][col].div_floor(&a[pivot_row][col]);
            if !q.is_zero() {
                for c in 0..ncols {
                    let t = &a[pivot_row][c] * &q;
                    a[r][c] -= t;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == a.len() {
            break;
        }
    }
    a.truncate(pivot_row);
    a
}

const PRESCREEN_P: u64 = 2305843009213693951; // 2^61 - 1, prime

fn mod_p(x: &BigInt) -> u64 {
    use num_traits::ToPrimitive;
    let p = BigInt::from(PRESCREEN_P);
    let mut r = x % &p;
    if r.is_negative() {
        r += &p;
    }
    r.to_u64().unwrap()
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRESCREEN_P as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRESCREEN_P - 2)
}

/// Nullspace dimension of an integer matrix modulo a fixed 61-bit prime.
/// Fast prescreen before committing to exact elimination.
pub fn nullspace_dim_mod_p(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(mod_p).collect::<Vec<u64>>())
        .collect();
    let m = a.len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let inv = inv_mod(a[rank][col]);
        for c in col..ncols {
            a[rank][c] = mul_mod(a[rank][c], inv);
        }
        for r in 0..m {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for c in col..ncols {
                    let sub = mul_mod(a[rank][c], f);
                    a[r][c] = (a[r][c] + PRESCREEN_P - sub) % PRESCREEN_P;
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    ncols - rank
}
