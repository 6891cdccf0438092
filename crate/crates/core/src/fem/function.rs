use num_complex::Complex;

use super::mesh::Mesh1D;
use super::operators::FemOperators;
use super::quad::QuadCache;
use super::spatial::{SpatialFn, ZeroFn};
use crate::error::{Error, Result};
use crate::numerics::{cscale, Real};

/// P1 function with homogeneous Dirichlet ends, stored by nodal values.
#[derive(Clone, Debug, PartialEq)]
pub struct FemFunction<R: Real> {
    pub mesh: Mesh1D,
    pub values: Vec<Complex<R>>,
}

impl<R: Real> FemFunction<R> {
    pub fn zero(mesh: &Mesh1D) -> Self {
        Self { mesh: mesh.clone(), values: vec![Complex::new(R::zero(), R::zero()); mesh.n_nodes()] }
    }

    /// Wraps interior values; both boundary values are set to zero.
    pub fn from_interior(mesh: &Mesh1D, interior: Vec<Complex<R>>) -> Self {
        assert_eq!(interior.len(), mesh.n_interior());
        let zero = Complex::new(R::zero(), R::zero());
        let mut values = Vec::with_capacity(mesh.n_nodes());
        values.push(zero);
        values.extend(interior);
        values.push(zero);
        Self { mesh: mesh.clone(), values }
    }

    /// Nodal interpolant at interior nodes.
    pub fn interpolate(mesh: &Mesh1D, g: &dyn SpatialFn<R>) -> Self {
        let interior = (1..mesh.n_elems).map(|i| g.eval(mesh.node(i))).collect();
        Self::from_interior(mesh, interior)
    }

    pub fn interior(&self) -> &[Complex<R>] {
        &self.values[1..self.values.len() - 1]
    }

    /// Evaluates the piecewise-linear function at `x`.
    pub fn value_at(&self, x: R) -> Complex<R> {
        let ne = self.mesh.n_elems;
        let s = x / self.mesh.h::<R>();
        let mut e = s.to_f64().floor().max(0.0) as usize;
        if e >= ne {
            e = ne - 1;
        }
        let frac = s - R::from_usize(e);
        cscale(self.values[e], R::one() - frac) + cscale(self.values[e + 1], frac)
    }

    pub fn axpy(&mut self, a: Complex<R>, other: &FemFunction<R>) -> Result<()> {
        if !self.mesh.same_grid(&other.mesh) {
            return Err(Error::MeshMismatch);
        }
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += a * y;
        }
        Ok(())
    }

    pub fn sub(&self, other: &FemFunction<R>) -> Result<FemFunction<R>> {
        let mut d = self.clone();
        d.axpy(Complex::new(-R::one(), R::zero()), other)?;
        Ok(d)
    }
}

impl<R: Real> SpatialFn<R> for FemFunction<R> {
    fn eval(&self, x: R) -> Complex<R> {
        self.value_at(x)
    }
}

/// L2 projection onto the P1 space with zero boundary values.
pub fn l2_project<R: Real>(g: &dyn SpatialFn<R>, ops: &FemOperators<R>) -> Result<FemFunction<R>> {
    let cache = QuadCache::new(&ops.mesh, &ZeroFn, Complex::new(R::zero(), R::zero()), R::one())?;
    Ok(project_load(cache.load(g), ops))
}

/// Solves `M c = load` and wraps the result.
pub fn project_load<R: Real>(mut load: Vec<Complex<R>>, ops: &FemOperators<R>) -> FemFunction<R> {
    ops.solve_mass(&mut load);
    FemFunction::from_interior(&ops.mesh, load)
}

fn quadratic_form<R: Real>(u: &[Complex<R>], au: &[Complex<R>]) -> R {
    let s: R = u.iter().zip(au).map(|(x, y)| (x.conj() * y).re).sum();
    s.max(R::zero())
}

/// `(sqrt(u* M u), sqrt(u* S u))`: L2 norm and H1 seminorm.
pub fn norms<R: Real>(u: &FemFunction<R>, ops: &FemOperators<R>) -> Result<(R, R)> {
    if !u.mesh.same_grid(&ops.mesh) {
        return Err(Error::MeshMismatch);
    }
    let x = u.interior();
    let l2 = quadratic_form(x, &ops.apply_mass(x)).sqrt();
    let h1 = quadratic_form(x, &ops.apply_stiffness(x)).sqrt();
    Ok((l2, h1))
}

/// Full H1 norm `sqrt(|u|_L2^2 + |u|_H1^2)`.
pub fn h1_full_norm<R: Real>(u: &FemFunction<R>, ops: &FemOperators<R>) -> Result<R> {
    let (l2, h1) = norms(u, ops)?;
    Ok((l2 * l2 + h1 * h1).sqrt())
}

/// Exact interpolation of a P1 function onto a dyadic refinement.
pub fn transfer<R: Real>(u: &FemFunction<R>, fine: &Mesh1D) -> Result<FemFunction<R>> {
    let r = u.mesh.refinement_ratio(fine)?;
    let rr = R::from_usize(r);
    let values = (0..fine.n_nodes())
        .map(|i| {
            let e = i / r;
            let m = i % r;
            if m == 0 {
                u.values[e]
            } else {
                let frac = R::from_usize(m) / rr;
                cscale(u.values[e], R::one() - frac) + cscale(u.values[e + 1], frac)
            }
        })
        .collect();
    Ok(FemFunction { mesh: fine.clone(), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::assemble_operators;
    use crate::fem::spatial::chi;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn projection_of_p1_is_identity() {
        let mesh = Mesh1D::unit(8).unwrap();
        let ops = assemble_operators::<f64>(&mesh, 0.0).unwrap();
        let u = FemFunction::from_interior(&mesh, (1..8).map(|i| Complex::new((i as f64).sin(), i as f64)).collect());
        let p = l2_project(&u, &ops).unwrap();
        for (a, b) in p.values.iter().zip(&u.values) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn projection_residual_and_rate() {
        let g = |x: f64| c(x * (1.0 - x));
        let mut prev = 0.0;
        let mut rate = 0.0;
        for p in 2..9 {
            let n = 1 << p;
            let mesh = Mesh1D::unit(n).unwrap();
            let ops = assemble_operators::<f64>(&mesh, 0.0).unwrap();
            let cache = QuadCache::new(&mesh, &ZeroFn, c(0.0), 1.0).unwrap();
            let load = cache.load(&g);
            let u = l2_project(&g, &ops).unwrap();
            let mu = ops.apply_mass(u.interior());
            let res = load.iter().zip(&mu).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let scale = load.iter().map(|a| a.norm()).fold(0.0, f64::max);
            assert!(res <= 1e-12 * scale);
            // error by fine quadrature
            let fine = QuadCache::with_order(&mesh, &ZeroFn, c(0.0), 1.0, 10).unwrap();
            let diff: Vec<_> = fine.points().iter().map(|&x| g(x) - u.value_at(x)).collect();
            let h = 1.0 / n as f64;
            let rule = crate::numerics::GaussRule::<f64>::new(10).unwrap();
            let mut e2 = 0.0;
            for (k, d) in diff.iter().enumerate() {
                e2 += d.norm_sqr() * rule.weights[k % 10] * h;
            }
            let e = e2.sqrt();
            if p > 2 {
                rate = (prev / e).log2();
                assert!(rate > 1.9, "rate {rate}");
            }
            prev = e;
        }
        assert!((rate - 2.0).abs() < 0.05, "rate {rate}");
    }

    #[test]
    fn projection_of_step_is_stable() {
        let mesh = Mesh1D::unit(32).unwrap().with_breakpoints(&[0.5]).unwrap();
        let ops = assemble_operators::<f64>(&mesh, 0.0).unwrap();
        let u = l2_project(&|x: f64| c(chi(0.5, 1.0, x)), &ops).unwrap();
        let (l2, _) = norms(&u, &ops).unwrap();
        assert!(l2 <= 0.5f64.sqrt() + 1e-12);
    }

    #[test]
    fn norms_of_sine() {
        let pi = std::f64::consts::PI;
        let mut prev_l2 = f64::INFINITY;
        let mut prev_h1 = f64::INFINITY;
        for p in 4..9 {
            let mesh = Mesh1D::unit(1 << p).unwrap();
            let ops = assemble_operators::<f64>(&mesh, 0.0).unwrap();
            let u = FemFunction::interpolate(&mesh, &|x: f64| c((pi * x).sin()));
            let (l2, h1) = norms(&u, &ops).unwrap();
            let el2 = (l2 - 0.5f64.sqrt()).abs();
            let eh1 = (h1 - pi * 0.5f64.sqrt()).abs();
            assert!(el2 < prev_l2 && eh1 < prev_h1);
            assert!(el2 < 2.0 / (1 << (2 * p)) as f64);
            assert!(eh1 < 3.0 / (1 << p) as f64);
            prev_l2 = el2;
            prev_h1 = eh1;
        }
        let mesh = Mesh1D::unit(4).unwrap();
        let ops = assemble_operators::<f64>(&mesh, 0.0).unwrap();
        assert_eq!(norms(&FemFunction::zero(&mesh), &ops).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn transfer_preserves_norm() {
        let coarse = Mesh1D::unit(10).unwrap();
        let fine = Mesh1D::unit(80).unwrap();
        let u = FemFunction::from_interior(&coarse, (1..10).map(|i| Complex::new((i as f64).cos(), 0.3 * i as f64)).collect());
        let v = transfer(&u, &fine).unwrap();
        let (a, _) = norms(&u, &assemble_operators(&coarse, 0.0).unwrap()).unwrap();
        let (b, _) = norms(&v, &assemble_operators(&fine, 0.0).unwrap()).unwrap();
        assert!((a - b).abs() < 1e-13 * a);
        assert_eq!(transfer(&u, &coarse).unwrap(), u);
        assert!(matches!(transfer(&u, &Mesh1D::unit(30).unwrap()), Err(Error::NotNested { .. })));
    }

    #[test]
    fn transfer_of_hat() {
        let coarse = Mesh1D::unit(4).unwrap();
        let mut hat = FemFunction::<f64>::zero(&coarse);
        hat.values[2] = c(1.0);
        let v = transfer(&hat, &Mesh1D::unit(8).unwrap()).unwrap();
        let expect = [0.0, 0.0, 0.0, 0.5, 1.0, 0.5, 0.0, 0.0, 0.0];
        for (a, b) in v.values.iter().zip(expect) {
            assert_eq!(a.re, b);
        }
    }
}
