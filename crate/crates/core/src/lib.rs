//! Higher Green's functions on Fricke-extended congruence groups, exact
//! recognition of their special values, and period/Picard-Fuchs pipelines
//! for the mirror K3 family table.

pub mod exact;
pub mod green;
pub mod modgroup;
pub mod periods;
pub mod real;
pub mod recognize;
pub mod registry;

/// Arbitrary-precision real scalar used by the numeric evaluators.
pub type R = rug::Float;
/// Arbitrary-precision complex scalar.
pub type C = rug::Complex;
/// Exact integer.
pub type Z = num_bigint::BigInt;
/// Exact rational.
pub type Q = num_rational::BigRational;

/// Decimal digits -> mpfr precision in bits, with guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    // 3.33 bits per digit plus slack for long accumulations
    digits * 10 / 3 + 32
}
