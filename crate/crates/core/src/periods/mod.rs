//! Laurent polynomial period pipeline: Newton polytopes, constant-term
//! period sequences, Picard-Fuchs operator recovery, singular loci,
//! Frobenius solutions and mirror maps, basechange checks.

pub mod holonomic;
pub mod laurent;
pub mod polytope;

pub use holonomic::{
    apply_ode, find_recurrence, frobenius_solutions, mirror_map, ode_to_rec, predict_terms,
    pullback_check, rec_to_ode, singular_points, BasechangeMap, FrobeniusPair, HolonomicError,
    HolonomicOperator, MirrorMap, PullbackReport, SingularLocus, SingularPoint,
};
pub use laurent::{parse_laurent, LaurentError, LaurentPolynomial3};
pub use polytope::{newton_polytope, LatticePolytope3, PolytopeError};

use laurent::Exp3;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;

/// Constant terms a_n of phi^n, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSequence {
    pub terms: Vec<BigInt>,
}

impl PeriodSequence {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Period sequence a_0..a_{n_max} by sparse powers with polytope pruning:
/// an exponent e of phi^k is kept only if -e lies in j*Delta for some
/// j <= n_max - k, so it can still contribute to a constant term.
pub fn period_sequence(phi: &LaurentPolynomial3, n_max: usize) -> PeriodSequence {
    let facets = newton_polytope(phi).ok().and_then(|p| p.facets().ok());
    let prunable = facets
        .as_ref()
        .map(|fs| fs.iter().all(|(_, c)| *c >= 1))
        .unwrap_or(false);
    let keep = |e: &Exp3, k: usize| -> bool {
        if !prunable {
            return true;
        }
        let budget = (n_max - k) as i64;
        for (nrm, c) in facets.as_ref().unwrap() {
            let v = -(nrm[0] * e[0] + nrm[1] * e[1] + nrm[2] * e[2]);
            if v > budget * c {
                return false;
            }
        }
        true
    };
    let mut terms = vec![BigInt::from(1u32)];
    let support: Vec<(Exp3, BigInt)> =
        phi.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
    let mut cur: HashMap<Exp3, BigInt> = HashMap::new();
    cur.insert([0, 0, 0], BigInt::from(1u32));
    for k in 1..=n_max {
        let mut next: HashMap<Exp3, BigInt> = HashMap::with_capacity(cur.len() * 2);
        for (e1, c1) in &cur {
            for (e2, c2) in &support {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                if !keep(&e, k) {
                    continue;
                }
                let entry = next.entry(e).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        next.retain(|_, c| !c.is_zero());
        terms.push(next.get(&[0, 0, 0]).cloned().unwrap_or_else(BigInt::zero));
        cur = next;
    }
    PeriodSequence { terms }
}

/// Dense brute-force oracle: full expansion of phi^n with no pruning.
pub fn period_sequence_dense(phi: &LaurentPolynomial3, n_max: usize) -> PeriodSequence {
    let mut terms = vec![BigInt::from(1u32)];
    let mut cur = LaurentPolynomial3::constant(BigInt::from(1u32));
    for _ in 1..=n_max {
        cur = cur.mul(phi);
        terms.push(cur.constant_term());
    }
    PeriodSequence { terms }
}

#[cfg(test)]
mod tests;
