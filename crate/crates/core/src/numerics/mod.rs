//! Scalar precision, complex helpers, quadrature and small linear algebra.

pub mod dd;
pub mod dft;
pub mod quadrature;
pub mod scalar;
pub mod tridiag;

pub use dd::DoubleDouble;
pub use dft::{circle_points, dft_coefficients, dft_leading_coefficients, dft_radius};
pub use quadrature::GaussRule;
pub use scalar::{cabs, carg, cexp, cln, cpow, cplx, creal, cscale, to_c64, Precision, Real};
pub use tridiag::{tridiag_solve, TriDiagonal, TriFactor};
