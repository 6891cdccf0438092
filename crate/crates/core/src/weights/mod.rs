//! BDF generating polynomials, convolution quadrature weights and the
//! starting-correction coefficient tables.

mod bdf;
mod correction;

pub use bdf::{bdf_symbol, cq_weights, power_series, BdfSymbol, CqWeightTable, MAX_ORDER};
pub use correction::{correction_coeffs, CorrectionCoeffs};
