//! Independent references: Mittag-Leffler solutions for constant potentials,
//! contour quadrature of the discrete generating function, symbol defects and
//! weight checks.

mod contour;
pub mod gamma;
mod mittag_leffler;
mod symbols;
mod weights;

pub use contour::{contour_reference, ContourSpec};
pub use mittag_leffler::{
    crossover_radius, mittag_leffler, ml_asymptotic, ml_reference, ml_reference_fn, ml_taylor, EigenExpansion,
};
pub use symbols::{
    eta, fit_slope, gamma_l, gamma_numerator, mu, sector_grid, symbol_defect_eta, symbol_defect_mu, SymbolDefect,
};
pub use weights::{dft_weight_defect, grunwald_defect};
