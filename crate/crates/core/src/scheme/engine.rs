use num_complex::Complex;

use super::problem::{ProblemSpec, SourceTerm, Trajectory, Variant};
use crate::error::{Error, Result};
use crate::fem::{assemble_operators, project_load, FemFunction, LocalMass, Mesh1D, QuadCache};
use crate::numerics::{cscale, Real};
use crate::weights::{correction_coeffs, cq_weights};

type C<R> = Complex<R>;

fn czero<R: Real>() -> C<R> {
    Complex::new(R::zero(), R::zero())
}

/// `out += w * (sum_e m_e [u_e, u_{e+1}])` over interior rows.
#[inline]
fn add_weighted_mass<R: Real>(out: &mut [C<R>], mats: &[LocalMass<R>], nodal: &[C<R>], w: R) {
    let ne = mats.len();
    for (e, m) in mats.iter().enumerate() {
        let (ul, ur) = (nodal[e], nodal[e + 1]);
        if e > 0 {
            out[e - 1] += cscale(m.a * ul + m.b * ur, w);
        }
        if e + 1 < ne {
            out[e] += cscale(m.b * ul + m.c * ur, w);
        }
    }
}

#[inline]
fn axpy<R: Real>(out: &mut [C<R>], a: C<R>, x: &[C<R>]) {
    for (o, v) in out.iter_mut().zip(x) {
        *o += a * v;
    }
}

#[inline]
fn axpy_real<R: Real>(out: &mut [C<R>], a: R, x: &[C<R>]) {
    for (o, v) in out.iter_mut().zip(x) {
        *o += cscale(*v, a);
    }
}

fn partial_sums<R: Real>(d: &[R]) -> Vec<R> {
    let mut s = Vec::with_capacity(d.len() + 1);
    let mut acc = R::zero();
    s.push(acc);
    for &v in d {
        acc += v;
        s.push(acc);
    }
    s
}

/// Source history data kept across levels, by source structure.
enum SourceHistory<R: Real> {
    None,
    /// f = s(x) exp(-rho U t): the weighted history collapses onto level n.
    Collapsed { spatial: Vec<C<R>> },
    /// f = s(x) theta(t): loads of s at every level.
    Separable { spatial: Vec<C<R>>, theta: Vec<C<R>>, loads: Vec<Vec<C<R>>> },
    /// General f: weights and source values at every quadrature point and level.
    Pointwise { factors: Vec<Vec<C<R>>>, values: Vec<Vec<C<R>>> },
}

/// Runs one of the time-stepping schemes for `n_steps` uniform steps on [0, T].
pub fn run<R: Real>(
    p: &ProblemSpec<R>,
    k: usize,
    n_steps: usize,
    mesh: &Mesh1D,
    variant: Variant,
) -> Result<Trajectory<R>> {
    p.validate()?;
    if n_steps == 0 {
        return Err(Error::InvalidArgument("at least one time step is required".into()));
    }
    if mesh.length != p.length {
        return Err(Error::InvalidProblem(format!(
            "mesh length {} does not match domain length {}",
            mesh.length, p.length
        )));
    }
    let source_zero = p.source.is_zero();
    let g0_zero = p.zero_initial();
    match variant {
        Variant::ComparisonInitial if !source_zero => return Err(Error::NonzeroSourceUnsupported),
        Variant::ComparisonSource if !g0_zero => return Err(Error::NonzeroInitialUnsupported),
        _ => {}
    }
    let mesh = mesh.clone().with_breakpoints(&p.breakpoints())?;
    let n = n_steps;
    let tau = p.t_final / R::from_usize(n);
    let da = cq_weights(k, p.alpha, tau, n)?;
    let di = cq_weights(k, p.alpha - R::one(), tau, n)?;
    let coeffs = correction_coeffs(k)?;
    let (a, b): (Vec<R>, Vec<Vec<R>>) = match variant {
        Variant::Uncorrected => (Vec::new(), Vec::new()),
        _ => (coeffs.a_as(), coeffs.b_as()),
    };
    let sum_a = partial_sums(&da.d);
    let sum_i = partial_sums(&di.d);
    let tau_pow: Vec<R> = (0..k.max(1)).map(|l| tau.powi(l as i32)).collect();

    let ops = assemble_operators(&mesh, da.d[0])?;
    let factorizations = 1;
    let mut cache = QuadCache::new(&mesh, p.u.as_ref(), p.rho, tau)?;
    let nq = cache.points().len();
    let ji = mesh.n_interior();
    let xs: Vec<R> = cache.points().to_vec();
    let us: Vec<R> = cache.potential().to_vec();

    let g0_q = if g0_zero { Vec::new() } else { cache.sample(p.g0.as_ref()) };

    // Taylor data d^l f(0) at the quadrature points, l = 0..k-2
    let n_deriv = if source_zero || a.is_empty() { 0 } else { k - 1 };
    let mut derivs: Vec<Vec<C<R>>> = Vec::with_capacity(n_deriv);
    for l in 0..n_deriv {
        let mut v = Vec::with_capacity(nq);
        for q in 0..nq {
            v.push(if l == 0 {
                p.source.eval(xs[q], R::zero(), p.rho, us[q])
            } else {
                p.source.dt_at_zero(l, xs[q], p.rho, us[q])?
            });
        }
        derivs.push(v);
    }

    let mut history = if source_zero || variant == Variant::ComparisonSource {
        SourceHistory::None
    } else {
        match &p.source {
            SourceTerm::ExpRhoU { spatial } => SourceHistory::Collapsed { spatial: cache.sample(spatial.as_ref()) },
            SourceTerm::Separable { spatial, time } => {
                let theta = (0..=n).map(|m| time.eval(tau * R::from_usize(m))).collect();
                let spatial = cache.sample(spatial.as_ref());
                let loads = vec![cache.weighted_load_samples(&spatial)];
                SourceHistory::Separable { spatial, theta, loads }
            }
            _ => SourceHistory::Pointwise {
                factors: vec![cache.factors().to_vec()],
                values: vec![(0..nq).map(|q| p.source.eval(xs[q], R::zero(), p.rho, us[q])).collect()],
            },
        }
    };

    // correction loads V_l at each level
    let mut vloads: Vec<Vec<Vec<C<R>>>> = Vec::new();
    if n_deriv > 0 && variant != Variant::ComparisonSource {
        vloads.push(derivs.iter().map(|d| cache.weighted_load_samples(d)).collect());
    }

    // projected source data for the comparison scheme
    let mut projected: Vec<Vec<C<R>>> = Vec::new();
    let mut proj_corr: Vec<Vec<C<R>>> = Vec::new();
    if variant == Variant::ComparisonSource && !source_zero {
        let f0: Vec<C<R>> = (0..nq).map(|q| p.source.eval(xs[q], R::zero(), p.rho, us[q])).collect();
        projected.push(project_load(cache.assemble_load(&f0), &ops).values);
        let pd: Vec<Vec<C<R>>> =
            derivs.iter().map(|d| project_load(cache.assemble_load(d), &ops).values).collect();
        for j in 1..k {
            let mut c = vec![czero(); mesh.n_nodes()];
            if let Some(p0) = pd.first() {
                axpy_real(&mut c, a[j - 1], p0);
            }
            for l in 1..pd.len() {
                axpy_real(&mut c, b[l - 1][j - 1] * tau_pow[l], &pd[l]);
            }
            proj_corr.push(c);
        }
    }

    let mut wmass: Vec<Vec<LocalMass<R>>> = Vec::with_capacity(n + 1);
    wmass.push(cache.weighted_local_mass());
    let mut steps: Vec<FemFunction<R>> = Vec::with_capacity(n + 1);
    steps.push(if g0_zero { FemFunction::zero(&mesh) } else { FemFunction::interpolate(&mesh, p.g0.as_ref()) });

    for step in 1..=n {
        cache.advance();
        wmass.push(cache.weighted_local_mass());
        let mut rhs = vec![czero(); ji];

        for i in 1..step {
            add_weighted_mass(&mut rhs, &wmass[i], &steps[step - i].values, -da.d[i]);
        }

        if !g0_zero {
            let l0 = cache.weighted_load_samples(&g0_q);
            match variant {
                Variant::ComparisonInitial => {
                    let proj = project_load(l0, &ops);
                    axpy_real(&mut rhs, sum_a[step], &ops.apply_mass(proj.interior()));
                    if step < k {
                        axpy_real(&mut rhs, -a[step - 1], &ops.apply_stiffness(proj.interior()));
                    }
                }
                _ => {
                    let mut coef = sum_a[step];
                    for j in 1..k.min(a.len() + 1) {
                        if step >= j {
                            coef += da.d[step - j] * a[j - 1];
                        }
                    }
                    axpy_real(&mut rhs, coef, &l0);
                }
            }
        }

        match &mut history {
            SourceHistory::None => {}
            SourceHistory::Collapsed { spatial } => {
                let load = cache.weighted_load_samples(spatial);
                axpy_real(&mut rhs, sum_i[step], &load);
            }
            SourceHistory::Separable { spatial, theta, loads } => {
                loads.push(cache.weighted_load_samples(spatial));
                for i in 0..step {
                    axpy(&mut rhs, cscale(theta[step - i], di.d[i]), &loads[i]);
                }
            }
            SourceHistory::Pointwise { factors, values } => {
                factors.push(cache.factors().to_vec());
                let t = cache.time();
                values.push((0..nq).map(|q| p.source.eval(xs[q], t, p.rho, us[q])).collect());
                let mut acc = vec![czero(); nq];
                for i in 0..step {
                    let (e, f) = (&factors[i], &values[step - i]);
                    let d = di.d[i];
                    for q in 0..nq {
                        acc[q] += cscale(e[q] * f[q], d);
                    }
                }
                axpy_real(&mut rhs, R::one(), &cache.assemble_load(&acc));
            }
        }

        if !vloads.is_empty() {
            vloads.push(derivs.iter().map(|d| cache.weighted_load_samples(d)).collect());
            for j in 1..k {
                if step < j {
                    continue;
                }
                let m = step - j;
                let w = di.d[m];
                let v = &vloads[m];
                axpy_real(&mut rhs, w * a[j - 1], &v[0]);
                for l in 1..v.len() {
                    axpy_real(&mut rhs, w * b[l - 1][j - 1] * tau_pow[l], &v[l]);
                }
            }
        }

        if variant == Variant::ComparisonSource && !source_zero {
            let t = cache.time();
            let f: Vec<C<R>> = (0..nq).map(|q| p.source.eval(xs[q], t, p.rho, us[q])).collect();
            projected.push(project_load(cache.assemble_load(&f), &ops).values);
            for i in 0..step {
                add_weighted_mass(&mut rhs, &wmass[i], &projected[step - i], di.d[i]);
            }
            for j in 1..k {
                if step >= j {
                    add_weighted_mass(&mut rhs, &wmass[step - j], &proj_corr[j - 1], di.d[step - j]);
                }
            }
        }

        ops.solve_system(&mut rhs);
        steps.push(FemFunction::from_interior(&mesh, rhs));
    }

    Ok(Trajectory { tau, k, variant, steps, factorizations })
}
