use num_complex::Complex;
use rayon::prelude::*;

use super::symbols::{eta, mu};
use crate::error::{Error, Result};
use crate::fem::{assemble_operators, FemFunction, Mesh1D, QuadCache};
use crate::numerics::{cabs, cexp, cpow, cplx, cscale, GaussRule, Real, TriDiagonal};
use crate::scheme::ProblemSpec;
use crate::weights::{bdf_symbol, correction_coeffs};

const PANEL_ORDER: usize = 16;

/// Truncated Hankel contour: arc `|z| = kappa` joined to rays at `+-theta`
/// that end at `|z| = pi / (tau sin theta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec {
    pub theta: f64,
    pub kappa: f64,
    pub tau: f64,
    pub arc_nodes: usize,
    pub ray_nodes: usize,
}

impl ContourSpec {
    pub const DEFAULT_THETA_OFFSET: f64 = 0.15;

    /// Default angle and radius for `p` at step `tau`, with 400 nodes in total.
    pub fn new<R: Real>(p: &ProblemSpec<R>, tau: f64) -> Self {
        let umax = (0..=2000)
            .map(|i| p.u.eval(R::from_f64(p.length * i as f64 / 2000.0)).re.to_f64().abs())
            .fold(0.0, f64::max);
        let rho = cabs(p.rho).to_f64();
        let kappa = (8.0 * rho * umax).max(2.0 / p.t_final.to_f64());
        Self {
            theta: std::f64::consts::FRAC_PI_2 + Self::DEFAULT_THETA_OFFSET,
            kappa,
            tau,
            arc_nodes: 128,
            ray_nodes: 136,
        }
    }

    /// Same contour with every node count multiplied by `factor`.
    pub fn refined(self, factor: usize) -> Self {
        Self { arc_nodes: self.arc_nodes * factor, ray_nodes: self.ray_nodes * factor, ..self }
    }

    pub fn total_nodes(&self) -> usize {
        panels(self.arc_nodes) * PANEL_ORDER + 2 * panels(self.ray_nodes) * PANEL_ORDER
    }

    pub fn ray_extent(&self) -> f64 {
        std::f64::consts::PI / (self.tau * self.theta.sin())
    }

    fn validate(&self, kappa_min: f64) -> Result<()> {
        let bad = |m: String| Err(Error::ContourParamInvalid(m));
        if !(self.theta > std::f64::consts::FRAC_PI_2 && self.theta < std::f64::consts::PI) {
            return bad(format!("theta = {} must lie in (pi/2, pi)", self.theta));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return bad(format!("tau = {} must be positive", self.tau));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return bad(format!("kappa = {} must be positive", self.kappa));
        }
        if self.kappa < kappa_min * (1.0 - 1e-12) {
            return bad(format!("kappa = {} is below 8 |rho| max|U| = {kappa_min}", self.kappa));
        }
        if self.kappa >= self.ray_extent() {
            return bad(format!("kappa = {} exceeds the ray extent {}", self.kappa, self.ray_extent()));
        }
        if self.arc_nodes == 0 || self.ray_nodes == 0 {
            return bad("node counts must be positive".into());
        }
        Ok(())
    }
}

fn panels(nodes: usize) -> usize {
    nodes.div_ceil(PANEL_ORDER)
}

/// Nodes `z` and weights `dz` of the composite Gauss rule, ordered from the
/// lower ray end through the arc to the upper ray end.
fn contour_nodes<R: Real>(cs: &ContourSpec) -> Result<Vec<(Complex<R>, Complex<R>)>> {
    let rule = GaussRule::<R>::new(PANEL_ORDER)?;
    let theta = R::from_f64(cs.theta);
    let kappa = R::from_f64(cs.kappa);
    let rmax = R::pi() / (R::from_f64(cs.tau) * theta.sin_cos().0);
    let mut out = Vec::with_capacity(cs.total_nodes());
    let ray = |sign: R| {
        let (s, c) = (sign * theta).sin_cos();
        let dir = cplx(c, s);
        let np = panels(cs.ray_nodes);
        let h = (rmax - kappa) / R::from_usize(np);
        let mut pts = Vec::with_capacity(np * PANEL_ORDER);
        for pnl in 0..np {
            let r0 = kappa + h * R::from_usize(pnl);
            for (xi, w) in rule.points.iter().zip(&rule.weights) {
                pts.push((cscale(dir, r0 + h * *xi), cscale(dir, h * *w)));
            }
        }
        pts
    };
    // lower ray runs inward
    let lower = ray(-R::one());
    out.extend(lower.into_iter().rev().map(|(z, w)| (z, -w)));
    let np = panels(cs.arc_nodes);
    let h = R::from_i64(2) * theta / R::from_usize(np);
    for pnl in 0..np {
        let p0 = -theta + h * R::from_usize(pnl);
        for (xi, w) in rule.points.iter().zip(&rule.weights) {
            let (s, c) = (p0 + h * *xi).sin_cos();
            let z = cplx(kappa * c, kappa * s);
            out.push((z, z * cplx(R::zero(), h * *w)));
        }
    }
    let upper = ray(R::one());
    out.extend(upper);
    Ok(out)
}

/// Evaluates step `n` of the corrected scheme from its generating function by
/// contour quadrature of `tau / (2 pi i) int e^{z t_n} G(e^{-z tau}) dz`.
pub fn contour_reference<R: Real>(
    p: &ProblemSpec<R>,
    k: usize,
    n: usize,
    mesh: &Mesh1D,
    cs: &ContourSpec,
) -> Result<FemFunction<R>> {
    p.validate()?;
    let sym = bdf_symbol(k)?;
    let coeffs = correction_coeffs(k)?;
    let a: Vec<R> = coeffs.a_as();
    let mesh = mesh.clone().with_breakpoints(&p.breakpoints())?;
    let tau = R::from_f64(cs.tau);
    let t_n = tau * R::from_usize(n);
    if n == 0 || t_n.to_f64() > p.t_final.to_f64() * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!("step {n} is outside (0, T]")));
    }
    let cache = QuadCache::new(&mesh, p.u.as_ref(), p.rho, tau)?;
    cs.validate(8.0 * cabs(p.rho).to_f64() * cache.max_abs_potential().to_f64())?;

    let xs = cache.points();
    let us = cache.potential();
    let nq = xs.len();
    let zero = Complex::new(R::zero(), R::zero());
    let shift: Vec<Complex<R>> = us.iter().map(|&u| cexp(cscale(p.rho, -(tau * u)))).collect();
    let g0 = if p.zero_initial() { Vec::new() } else { cache.sample(p.g0.as_ref()) };

    // Taylor data d^l f(0), l = 0..k-2, and the remainder at t_1..t_n
    let n_taylor = if p.source.is_zero() || k == 1 { 0 } else { k - 1 };
    let mut taylor: Vec<Vec<Complex<R>>> = Vec::with_capacity(n_taylor);
    for l in 0..n_taylor {
        let mut v = Vec::with_capacity(nq);
        for q in 0..nq {
            v.push(p.source.dt_at_zero(l, xs[q], p.rho, us[q])?);
        }
        taylor.push(v);
    }
    let mut remainder: Vec<Vec<Complex<R>>> = Vec::new();
    if !p.source.is_zero() {
        for m in 1..=n {
            let t = tau * R::from_usize(m);
            let mut v: Vec<Complex<R>> = (0..nq).map(|q| p.source.eval(xs[q], t, p.rho, us[q])).collect();
            let mut tp = R::one();
            let mut fact = R::one();
            for (l, tl) in taylor.iter().enumerate() {
                if l > 0 {
                    tp *= t;
                    fact *= R::from_usize(l);
                }
                for q in 0..nq {
                    v[q] -= cscale(tl[q], tp / fact);
                }
            }
            remainder.push(v);
        }
    }

    let ops = assemble_operators::<R>(&mesh, R::zero())?;
    let ji = mesh.n_interior();
    let nodes = contour_nodes::<R>(cs)?;
    let alpha = p.alpha;
    let inv_tau = R::one() / tau;

    let contributions: Vec<Result<Vec<Complex<R>>>> = nodes
        .par_iter()
        .enumerate()
        .map(|(idx, &(z, dz))| {
            let zeta = cexp(-cscale(z, tau));
            let mut di = Vec::with_capacity(nq);
            let mut da = Vec::with_capacity(nq);
            for s in &shift {
                let xi = zeta * s;
                let d = cscale(sym.eval(xi), inv_tau);
                let dpow = cpow(d, alpha - R::one());
                di.push(dpow);
                da.push(dpow * d);
            }

            let mut values = vec![zero; nq];
            if !g0.is_empty() {
                for q in 0..nq {
                    values[q] += di[q] * cscale(mu(k, zeta * shift[q])?, inv_tau) * g0[q];
                }
            }
            if !p.source.is_zero() {
                let mut src = vec![zero; nq];
                if n_taylor > 0 {
                    let one = Complex::new(R::one(), R::zero());
                    let mut c0 = zeta / (one - zeta);
                    let mut zp = one;
                    for &aj in &a {
                        zp *= zeta;
                        c0 += cscale(zp, aj);
                    }
                    for q in 0..nq {
                        src[q] += c0 * taylor[0][q];
                    }
                    let mut tl = R::one();
                    for (l, tay) in taylor.iter().enumerate().take(n_taylor).skip(1) {
                        tl *= tau;
                        let e = cscale(eta(k, l, zeta)?, tl);
                        for q in 0..nq {
                            src[q] += e * tay[q];
                        }
                    }
                }
                let mut zp = Complex::new(R::one(), R::zero());
                for r in &remainder {
                    zp *= zeta;
                    for q in 0..nq {
                        src[q] += zp * r[q];
                    }
                }
                for q in 0..nq {
                    values[q] += di[q] * src[q];
                }
            }
            let mut rhs = cache.assemble_load(&values);

            let mats = cache.local_mass_with(&da);
            let mut diag = vec![zero; ji];
            let mut off = vec![zero; ji.saturating_sub(1)];
            for (e, m) in mats.iter().enumerate() {
                if e > 0 {
                    diag[e - 1] += m.a;
                }
                if e < ji {
                    diag[e] += m.c;
                }
                if e > 0 && e < ji {
                    off[e - 1] += m.b;
                }
            }
            for d in diag.iter_mut() {
                d.re += ops.stiff_diag;
            }
            for o in off.iter_mut() {
                o.re += ops.stiff_off;
            }
            let sys = TriDiagonal { sub: off.clone(), diag, sup: off };
            let fac = sys.factor().map_err(|_| Error::OperatorSolveFailure { node: idx })?;
            fac.solve_in_place(&mut rhs);

            let w = cexp(cscale(z, t_n)) * dz;
            Ok(rhs.into_iter().map(|v| v * w).collect())
        })
        .collect();

    let mut acc = vec![zero; ji];
    for c in contributions {
        for (a, v) in acc.iter_mut().zip(c?) {
            *a += v;
        }
    }
    // tau / (2 pi i)
    let scale = cplx(R::zero(), -tau / (R::from_i64(2) * R::pi()));
    let values = acc.into_iter().map(|v| v * scale).collect();
    Ok(FemFunction::from_interior(&mesh, values))
}
