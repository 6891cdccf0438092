//! Fully discrete BDF-k convolution quadrature schemes.

mod engine;
mod problem;

pub use engine::run;
pub use problem::{zero_fn, ProblemSpec, SourceFn, SourceTerm, TimeProfile, Trajectory, Variant};

use crate::error::Result;
use crate::fem::Mesh1D;
use crate::numerics::Real;

/// Corrected scheme: every step carries the starting corrections.
pub fn run_corrected<R: Real>(p: &ProblemSpec<R>, k: usize, n_steps: usize, mesh: &Mesh1D) -> Result<Trajectory<R>> {
    run(p, k, n_steps, mesh, Variant::Corrected)
}

/// Plain BDF-k convolution quadrature without corrections.
pub fn run_uncorrected<R: Real>(p: &ProblemSpec<R>, k: usize, n_steps: usize, mesh: &Mesh1D) -> Result<Trajectory<R>> {
    run(p, k, n_steps, mesh, Variant::Uncorrected)
}

/// Homogeneous problem with the initial value projected after weighting and
/// corrections confined to the first k-1 steps.
pub fn run_comparison_initial<R: Real>(
    p: &ProblemSpec<R>,
    k: usize,
    n_steps: usize,
    mesh: &Mesh1D,
) -> Result<Trajectory<R>> {
    run(p, k, n_steps, mesh, Variant::ComparisonInitial)
}

/// Zero initial value with the source projected before weighting.
pub fn run_comparison_source<R: Real>(
    p: &ProblemSpec<R>,
    k: usize,
    n_steps: usize,
    mesh: &Mesh1D,
) -> Result<Trajectory<R>> {
    run(p, k, n_steps, mesh, Variant::ComparisonSource)
}
