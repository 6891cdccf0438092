use num_complex::Complex;

use super::mesh::Mesh1D;
use crate::error::{Error, Result};
use crate::numerics::{creal, cscale, Real, TriDiagonal, TriFactor};

/// P1 mass and stiffness on the interior nodes of a uniform mesh, together
/// with the factored system `d0 M + S` and the factored mass matrix.
#[derive(Clone, Debug)]
pub struct FemOperators<R: Real> {
    pub mesh: Mesh1D,
    pub d0: R,
    pub mass_diag: R,
    pub mass_off: R,
    pub stiff_diag: R,
    pub stiff_off: R,
    system: TriFactor<R>,
    mass_factor: TriFactor<R>,
}

fn symmetric_band<R: Real>(n: usize, diag: R, off: R) -> TriDiagonal<R> {
    TriDiagonal {
        sub: vec![creal(off); n - 1],
        diag: vec![creal(diag); n],
        sup: vec![creal(off); n - 1],
    }
}

fn apply_band<R: Real>(diag: R, off: R, x: &[Complex<R>]) -> Vec<Complex<R>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut v = cscale(x[i], diag);
            if i > 0 {
                v += cscale(x[i - 1], off);
            }
            if i + 1 < n {
                v += cscale(x[i + 1], off);
            }
            v
        })
        .collect()
}

pub fn assemble_operators<R: Real>(mesh: &Mesh1D, d0: R) -> Result<FemOperators<R>> {
    if mesh.n_elems < 2 {
        return Err(Error::MeshTooCoarse(mesh.n_elems));
    }
    if d0 < R::zero() {
        return Err(Error::InvalidArgument(format!("system shift must be nonnegative, got {d0}")));
    }
    let h: R = mesh.h();
    let n = mesh.n_interior();
    let mass_diag = h * R::from_ratio(2, 3);
    let mass_off = h / R::from_i64(6);
    let stiff_diag = R::from_i64(2) / h;
    let stiff_off = -R::one() / h;
    let system = symmetric_band(n, d0 * mass_diag + stiff_diag, d0 * mass_off + stiff_off).factor()?;
    let mass_factor = symmetric_band(n, mass_diag, mass_off).factor().map_err(|_| Error::SingularMass)?;
    Ok(FemOperators { mesh: mesh.clone(), d0, mass_diag, mass_off, stiff_diag, stiff_off, system, mass_factor })
}

impl<R: Real> FemOperators<R> {
    pub fn n_interior(&self) -> usize {
        self.mesh.n_interior()
    }

    pub fn mass(&self) -> TriDiagonal<R> {
        symmetric_band(self.n_interior(), self.mass_diag, self.mass_off)
    }

    pub fn stiffness(&self) -> TriDiagonal<R> {
        symmetric_band(self.n_interior(), self.stiff_diag, self.stiff_off)
    }

    pub fn apply_mass(&self, x: &[Complex<R>]) -> Vec<Complex<R>> {
        apply_band(self.mass_diag, self.mass_off, x)
    }

    pub fn apply_stiffness(&self, x: &[Complex<R>]) -> Vec<Complex<R>> {
        apply_band(self.stiff_diag, self.stiff_off, x)
    }

    /// Solves `(d0 M + S) x = rhs` in place.
    pub fn solve_system(&self, rhs: &mut [Complex<R>]) {
        self.system.solve_in_place(rhs);
    }

    /// Solves `M x = rhs` in place.
    pub fn solve_mass(&self, rhs: &mut [Complex<R>]) {
        self.mass_factor.solve_in_place(rhs);
    }
}
