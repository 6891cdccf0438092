//! Uniform P1 finite elements on an interval.

mod function;
mod mesh;
mod operators;
mod quad;
mod spatial;

pub use function::{h1_full_norm, l2_project, norms, project_load, transfer, FemFunction};
pub use mesh::Mesh1D;
pub use operators::{assemble_operators, FemOperators};
pub use quad::{apply_local_mass, LocalMass, QuadCache, DEFAULT_ORDER, REFRESH_INTERVAL};
pub use spatial::{chi, ConstFn, Piecewise, SpatialFn, ZeroFn};
