//! Scalar abstraction for the numeric kernels.
//!
//! The point-pair invariant and the Legendre kernel are generic over the
//! scalar so they can be unit-tested on `f64` and run in production on
//! MPFR floats. Arbitrary-precision values carry their own precision, so
//! construction goes through a same-precision template value.

use rug::ops::CompleteRound;

pub trait Real: Clone + PartialOrd {
    fn from_f64_like(template: &Self, v: f64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
}

impl Real for f64 {
    fn from_f64_like(_: &Self, v: f64) -> Self {
        v
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Real for rug::Float {
    fn from_f64_like(template: &Self, v: f64) -> Self {
        rug::Float::with_val(template.prec(), v)
    }
    fn add(&self, rhs: &Self) -> Self {
        (self + rhs).complete(self.prec())
    }
    fn sub(&self, rhs: &Self) -> Self {
        (self - rhs).complete(self.prec())
    }
    fn mul(&self, rhs: &Self) -> Self {
        (self * rhs).complete(self.prec())
    }
    fn div(&self, rhs: &Self) -> Self {
        (self / rhs).complete(self.prec())
    }
    fn neg(&self) -> Self {
        (-self).complete(self.prec())
    }
    fn ln(&self) -> Self {
        self.clone().ln()
    }
    fn sqrt(&self) -> Self {
        self.clone().sqrt()
    }
    fn abs(&self) -> Self {
        self.clone().abs()
    }
    fn to_f64(&self) -> f64 {
        rug::Float::to_f64(self)
    }
}
