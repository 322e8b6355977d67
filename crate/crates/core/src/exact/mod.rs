//! Exact arithmetic building blocks: integer/rational polynomials,
//! truncated power series, fraction-free linear algebra, and real-root
//! isolation.

pub mod linalg;
pub mod qseries;
pub mod roots;
pub mod zpoly;

pub use linalg::{nullspace_rational, nullspace_dim_mod_p};
pub use qseries::QSeries;
pub use zpoly::{QPoly, ZPoly};
