use crate::error::{Error, Result};
use crate::numerics::Real;

const ALIGN_TOL: f64 = 1e-9;

/// Uniform partition of (0, L) with interior breakpoints that fall on nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh1D {
    pub length: f64,
    pub n_elems: usize,
    pub breakpoints: Vec<f64>,
}

impl Mesh1D {
    pub fn new(length: f64, n_elems: usize) -> Result<Self> {
        if n_elems < 2 {
            return Err(Error::MeshTooCoarse(n_elems));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidArgument(format!("domain length must be positive, got {length}")));
        }
        Ok(Self { length, n_elems, breakpoints: Vec::new() })
    }

    pub fn unit(n_elems: usize) -> Result<Self> {
        Self::new(1.0, n_elems)
    }

    /// Registers discontinuity locations. Points on the boundary or outside the
    /// domain are ignored; interior ones must coincide with a node.
    pub fn with_breakpoints(mut self, points: &[f64]) -> Result<Self> {
        for &b in points {
            if b <= 0.0 || b >= self.length {
                continue;
            }
            let s = b * self.n_elems as f64 / self.length;
            if (s - s.round()).abs() > ALIGN_TOL * s.abs().max(1.0) {
                return Err(Error::MeshBreakpointMisaligned { breakpoint: b, n_elems: self.n_elems });
            }
            if !self.breakpoints.contains(&b) {
                self.breakpoints.push(b);
            }
        }
        self.breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(self)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_elems + 1
    }

    pub fn n_interior(&self) -> usize {
        self.n_elems - 1
    }

    pub fn h<R: Real>(&self) -> R {
        R::from_f64(self.length) / R::from_usize(self.n_elems)
    }

    pub fn node<R: Real>(&self, i: usize) -> R {
        R::from_f64(self.length) * R::from_usize(i) / R::from_usize(self.n_elems)
    }

    pub fn nodes<R: Real>(&self) -> Vec<R> {
        (0..=self.n_elems).map(|i| self.node(i)).collect()
    }

    /// Same partition of the same domain.
    pub fn same_grid(&self, other: &Mesh1D) -> bool {
        self.n_elems == other.n_elems && self.length == other.length
    }

    /// 2^m such that `fine` refines `self` dyadically.
    pub fn refinement_ratio(&self, fine: &Mesh1D) -> Result<usize> {
        let err = Error::NotNested { coarse: self.n_elems, fine: fine.n_elems };
        if self.length != fine.length || !fine.n_elems.is_multiple_of(self.n_elems) {
            return Err(err);
        }
        let r = fine.n_elems / self.n_elems;
        if r.is_power_of_two() {
            Ok(r)
        } else {
            Err(err)
        }
    }
}
