use num_complex::Complex;

use super::function::FemFunction;
use super::mesh::Mesh1D;
use super::spatial::SpatialFn;
use crate::error::{Error, Result};
use crate::numerics::{cexp, cscale, GaussRule, Real};

pub const DEFAULT_ORDER: usize = 5;
pub const REFRESH_INTERVAL: usize = 64;

/// Symmetric 2x2 element matrix `[[a, b], [b, c]]` in (left, right) node order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalMass<R: Real> {
    pub a: Complex<R>,
    pub b: Complex<R>,
    pub c: Complex<R>,
}

impl<R: Real> LocalMass<R> {
    pub fn scaled(self, s: R) -> Self {
        Self { a: cscale(self.a, s), b: cscale(self.b, s), c: cscale(self.c, s) }
    }
}

/// Per-element Gauss points with cached potential values and the substantial
/// weights `exp(-t_i rho U(x_q))` at the current time level.
#[derive(Clone, Debug)]
pub struct QuadCache<R: Real> {
    mesh: Mesh1D,
    order: usize,
    points: Vec<R>,
    weights: Vec<R>,
    phi_l: Vec<R>,
    phi_r: Vec<R>,
    u: Vec<R>,
    rho: Complex<R>,
    tau: R,
    step: Vec<Complex<R>>,
    factors: Vec<Complex<R>>,
    level: usize,
}

impl<R: Real> QuadCache<R> {
    pub fn new(mesh: &Mesh1D, u: &dyn SpatialFn<R>, rho: Complex<R>, tau: R) -> Result<Self> {
        Self::with_order(mesh, u, rho, tau, DEFAULT_ORDER)
    }

    pub fn with_order(mesh: &Mesh1D, u: &dyn SpatialFn<R>, rho: Complex<R>, tau: R, order: usize) -> Result<Self> {
        if !(tau > R::zero()) {
            return Err(Error::NonPositiveTau(tau.to_f64()));
        }
        let rule = GaussRule::<R>::new(order)?;
        let h: R = mesh.h();
        let mut points = Vec::with_capacity(mesh.n_elems * order);
        let mut weights = Vec::with_capacity(mesh.n_elems * order);
        for e in 0..mesh.n_elems {
            let x0: R = mesh.node(e);
            for (xi, w) in rule.points.iter().zip(&rule.weights) {
                points.push(x0 + h * *xi);
                weights.push(h * *w);
            }
        }
        let phi_r = rule.points.clone();
        let phi_l = rule.points.iter().map(|&xi| R::one() - xi).collect();
        let mut u_vals = Vec::with_capacity(points.len());
        for &x in &points {
            let v = u.eval(x).re;
            if !v.is_finite() {
                return Err(Error::InvalidProblem(format!("potential is not finite at x = {x}")));
            }
            u_vals.push(v);
        }
        let step = u_vals.iter().map(|&uq| cexp(cscale(rho, -tau * uq))).collect();
        let factors = vec![Complex::new(R::one(), R::zero()); points.len()];
        Ok(Self {
            mesh: mesh.clone(),
            order,
            points,
            weights,
            phi_l,
            phi_r,
            u: u_vals,
            rho,
            tau,
            step,
            factors,
            level: 0,
        })
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn points(&self) -> &[R] {
        &self.points
    }

    pub fn potential(&self) -> &[R] {
        &self.u
    }

    pub fn max_abs_potential(&self) -> R {
        self.u.iter().fold(R::zero(), |m, v| m.max(v.abs()))
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn time(&self) -> R {
        self.tau * R::from_usize(self.level)
    }

    pub fn factors(&self) -> &[Complex<R>] {
        &self.factors
    }

    /// `exp(-t rho U(x_q))` at level `n` evaluated from scratch.
    pub fn exact_factor(&self, q: usize, n: usize) -> Complex<R> {
        cexp(cscale(self.rho, -(self.tau * R::from_usize(n)) * self.u[q]))
    }

    pub fn advance(&mut self) {
        self.level += 1;
        if self.level.is_multiple_of(REFRESH_INTERVAL) {
            for q in 0..self.factors.len() {
                self.factors[q] = self.exact_factor(q, self.level);
            }
        } else {
            for (f, s) in self.factors.iter_mut().zip(&self.step) {
                *f *= *s;
            }
        }
    }

    pub fn reset(&mut self) {
        self.level = 0;
        self.factors.iter_mut().for_each(|f| *f = Complex::new(R::one(), R::zero()));
    }

    fn check_time(&self, t: R) -> Result<()> {
        let now = self.time();
        let tol = R::from_f64(1e-12) * now.abs().max(R::one());
        if (t - now).abs() > tol {
            return Err(Error::CacheTimeMismatch { cache: now.to_f64(), requested: t.to_f64() });
        }
        Ok(())
    }

    /// Values of `g` at the quadrature points.
    pub fn sample(&self, g: &dyn SpatialFn<R>) -> Vec<Complex<R>> {
        self.points.iter().map(|&x| g.eval(x)).collect()
    }

    /// Interior load vector `sum_q w_q v_q phi_j(x_q)` of point values `v`.
    pub fn assemble_load(&self, values: &[Complex<R>]) -> Vec<Complex<R>> {
        let ne = self.mesh.n_elems;
        let q = self.order;
        let mut out = vec![Complex::new(R::zero(), R::zero()); ne - 1];
        for e in 0..ne {
            let mut left = Complex::new(R::zero(), R::zero());
            let mut right = Complex::new(R::zero(), R::zero());
            for i in 0..q {
                let k = e * q + i;
                let v = cscale(values[k], self.weights[k]);
                left += cscale(v, self.phi_l[i]);
                right += cscale(v, self.phi_r[i]);
            }
            if e > 0 {
                out[e - 1] += left;
            }
            if e + 1 < ne {
                out[e] += right;
            }
        }
        out
    }

    /// Load vector of `exp(-t rho U) v` for point values `v` at the current level.
    pub fn weighted_load_samples(&self, values: &[Complex<R>]) -> Vec<Complex<R>> {
        let prod: Vec<_> = values.iter().zip(&self.factors).map(|(v, f)| v * f).collect();
        self.assemble_load(&prod)
    }

    pub fn weighted_load(&self, t: R, g: &dyn SpatialFn<R>) -> Result<Vec<Complex<R>>> {
        self.check_time(t)?;
        Ok(self.weighted_load_samples(&self.sample(g)))
    }

    /// Unweighted load vector of `g`.
    pub fn load(&self, g: &dyn SpatialFn<R>) -> Vec<Complex<R>> {
        self.assemble_load(&self.sample(g))
    }

    /// Element matrices of the weighted mass at the current level. Level 0
    /// returns the exact P1 element mass.
    pub fn weighted_local_mass(&self) -> Vec<LocalMass<R>> {
        let ne = self.mesh.n_elems;
        if self.level == 0 {
            let h: R = self.mesh.h();
            let d = Complex::new(h / R::from_i64(3), R::zero());
            let o = Complex::new(h / R::from_i64(6), R::zero());
            return vec![LocalMass { a: d, b: o, c: d }; ne];
        }
        self.local_mass_with(&self.factors)
    }

    /// Element matrices of the mass weighted by arbitrary point values.
    pub fn local_mass_with(&self, weight: &[Complex<R>]) -> Vec<LocalMass<R>> {
        let ne = self.mesh.n_elems;
        let q = self.order;
        let zero = Complex::new(R::zero(), R::zero());
        (0..ne)
            .map(|e| {
                let (mut a, mut b, mut c) = (zero, zero, zero);
                for i in 0..q {
                    let k = e * q + i;
                    let v = cscale(weight[k], self.weights[k]);
                    let (l, r) = (self.phi_l[i], self.phi_r[i]);
                    a += cscale(v, l * l);
                    b += cscale(v, l * r);
                    c += cscale(v, r * r);
                }
                LocalMass { a, b, c }
            })
            .collect()
    }

    pub fn weighted_mass_apply(&self, t: R, u: &FemFunction<R>) -> Result<Vec<Complex<R>>> {
        self.check_time(t)?;
        if !u.mesh.same_grid(&self.mesh) {
            return Err(Error::MeshMismatch);
        }
        let mut out = vec![Complex::new(R::zero(), R::zero()); self.mesh.n_interior()];
        apply_local_mass(&self.weighted_local_mass(), &u.values, &mut out);
        Ok(out)
    }
}

/// Accumulates `sum_e m_e [u_e, u_{e+1}]` into the interior vector `out`,
/// with `nodal` holding all node values including the boundary.
pub fn apply_local_mass<R: Real>(mats: &[LocalMass<R>], nodal: &[Complex<R>], out: &mut [Complex<R>]) {
    let ne = mats.len();
    for (e, m) in mats.iter().enumerate() {
        let (ul, ur) = (nodal[e], nodal[e + 1]);
        if e > 0 {
            out[e - 1] += m.a * ul + m.b * ur;
        }
        if e + 1 < ne {
            out[e] += m.b * ul + m.c * ur;
        }
    }
}
