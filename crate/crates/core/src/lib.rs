//! Corrected BDF convolution quadrature with P1 finite elements for the
//! backward fractional Feynman-Kac equation.

// `!(a < b)` guards reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod fem;
pub mod numerics;
pub mod oracle;
pub mod scheme;
pub mod weights;

pub use error::{Error, Result};
