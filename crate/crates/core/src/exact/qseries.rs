//! Truncated power series over Q.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Power series truncated at a fixed order: coefficients of t^0 .. t^(n-1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    pub coeffs: Vec<BigRational>,
}

impl QSeries {
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order, BigRational::zero());
        QSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![BigRational::zero(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = QSeries::zero(order);
        if order > 0 {
            s.coeffs[0] = BigRational::one();
        }
        s
    }

    /// The series t.
    pub fn t(order: usize) -> Self {
        let mut s = QSeries::zero(order);
        if order > 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient, or None.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(order);
        QSeries::new(c, order.min(self.order()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        QSeries::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(), n)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        QSeries::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect(), n)
    }

    pub fn neg(&self) -> Self {
        QSeries::new(self.coeffs.iter().map(|c| -c).collect(), self.order())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QSeries::new(self.coeffs.iter().map(|c| c * k).collect(), self.order())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut v = vec![BigRational::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                v[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        QSeries::new(v, n)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Self {
        let n = self.order();
        assert!(!self.coeff(0).is_zero(), "series inverse needs unit constant term");
        let c0 = self.coeff(0);
        let mut v = vec![BigRational::zero(); n];
        v[0] = BigRational::one() / &c0;
        for k in 1..n {
            let mut s = BigRational::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &v[k - j];
            }
            v[k] = -s / &c0;
        }
        QSeries::new(v, n)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inverse())
    }

    /// Composition self(g); requires g(0) = 0.
    pub fn compose(&self, g: &Self) -> Self {
        let n = self.order().min(g.order());
        assert!(g.coeff(0).is_zero(), "composition needs g(0)=0");
        let mut acc = QSeries::zero(n);
        // Horner in g
        for c in self.coeffs.iter().take(n).rev() {
            acc = acc.mul(&g.truncate(n));
            acc.coeffs[0] += c;
        }
        acc
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Self {
        let n = self.order();
        assert!(self.coeff(0).is_zero(), "exp needs zero constant term");
        // f' = a' f, f_0 = 1, solved term by term
        let mut f = vec![BigRational::zero(); n];
        f[0] = BigRational::one();
        for k in 1..n {
            let mut s = BigRational::zero();
            for j in 1..=k {
                // a'_{j-1} = j * a_j
                s += BigRational::from_integer(j.into()) * &self.coeffs[j] * &f[k - j];
            }
            f[k] = s / BigRational::from_integer(k.into());
        }
        QSeries::new(f, n)
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Self {
        assert!(self.coeff(0).is_one(), "log needs constant term 1");
        // (log f)' = f'/f
        let fp = self.derivative();
        let g = fp.mul(&self.inverse());
        g.integrate()
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut v = vec![BigRational::zero(); n];
        for k in 1..n {
            v[k - 1] = BigRational::from_integer(k.into()) * &self.coeffs[k];
        }
        QSeries::new(v, n)
    }

    /// Antiderivative with zero constant term (drops the t^(n-1) input term).
    pub fn integrate(&self) -> Self {
        let n = self.order();
        let mut v = vec![BigRational::zero(); n];
        for k in 0..n - 1 {
            v[k + 1] = &self.coeffs[k] / BigRational::from_integer((k + 1).into());
        }
        QSeries::new(v, n)
    }

    /// Compositional inverse of a series t + O(t^2) (more generally
    /// c1*t + ... with c1 nonzero), by Lagrange-style Newton iteration.
    pub fn reversion(&self) -> Self {
        let n = self.order();
        assert!(self.coeff(0).is_zero() && !self.coeff(1).is_zero(), "reversion needs t*unit");
        // iterate g <- g - (f(g) - t)/f'(g), starting g = t/c1
        let c1 = self.coeff(1);
        let mut g = QSeries::t(n).scale(&(BigRational::one() / &c1));
        let fp = self.derivative();
        loop {
            let fg = self.compose(&g);
            let err = fg.sub(&QSeries::t(n));
            if err.is_zero() {
                break;
            }
            let corr = err.mul(&fp.compose(&g).inverse());
            g = g.sub(&corr);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn qi(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn exp_log_roundtrip() {
        let n = 12;
        let mut a = QSeries::zero(n);
        a.coeffs[1] = qi(3);
        a.coeffs[2] = qi(-2);
        a.coeffs[5] = BigRational::new(BigInt::from(1), BigInt::from(7));
        let e = a.exp();
        assert_eq!(e.log(), a);
    }

    #[test]
    fn inverse_works() {
        let n = 10;
        let mut a = QSeries::one(n);
        a.coeffs[1] = qi(-1); // 1 - t
        let inv = a.inverse();
        for k in 0..n {
            assert_eq!(inv.coeff(k), qi(1)); // geometric series
        }
    }

    #[test]
    fn reversion_roundtrip() {
        let n = 15;
        let mut f = QSeries::t(n);
        f.coeffs[2] = qi(5);
        f.coeffs[3] = qi(-1);
        f.coeffs[7] = qi(2);
        let g = f.reversion();
        let comp = f.compose(&g);
        assert_eq!(comp, QSeries::t(n));
    }
}
