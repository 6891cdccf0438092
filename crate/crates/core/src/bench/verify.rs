use super::config::{preset, resolve, ProblemDef};
use super::expr::parse_expr;
use crate::error::Result;
use crate::fem::{assemble_operators, norms, FemFunction, Mesh1D};
use crate::numerics::DoubleDouble;
use crate::oracle::{
    contour_reference, dft_weight_defect, grunwald_defect, ml_reference, sector_grid, symbol_defect_eta,
    symbol_defect_mu, ContourSpec,
};
use crate::scheme::run_corrected;

/// Outcome of one oracle check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, r: Result<(bool, String)>) -> Check {
    match r {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: e.to_string() },
    }
}

fn grunwald() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for g in [0.3, 0.5, 0.7, -0.3, -0.5, -0.7] {
        worst = worst.max(grunwald_defect(g, 64)?);
    }
    Ok((worst <= 1e-14, format!("max relative deviation {worst:.3e} (i <= 64)")))
}

fn dft() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for k in 1..=6 {
        for g in [0.5, -0.5] {
            worst = worst.max(dft_weight_defect(k, g, 1024)?);
        }
    }
    Ok((worst <= 1e-12, format!("max normwise deviation {worst:.3e} (k <= 6, N = 1024)")))
}

fn symbols() -> Result<(bool, String)> {
    let grid = sector_grid::<DoubleDouble>(1e-3, 1e-2, 10, std::f64::consts::FRAC_PI_2 + 0.15);
    let mut worst = 0.0f64;
    for k in 1..=6 {
        worst = worst.max((symbol_defect_mu(k, &grid)?.order - k as f64).abs());
        for l in 1..k.saturating_sub(1) {
            worst = worst.max((symbol_defect_eta(k, l, &grid)?.order - (k - l - 1) as f64).abs());
        }
    }
    Ok((worst <= 0.2, format!("max slope deviation {worst:.3}")))
}

fn contour() -> Result<(bool, String)> {
    let cfg = resolve(preset("example1").expect("built-in"))?;
    let p = cfg.problem.build::<f64>(0.3, 1.0);
    let mesh = Mesh1D::unit(20)?;
    let traj = run_corrected(&p, 2, 50, &mesh)?;
    let g = contour_reference(&p, 2, 10, &mesh, &ContourSpec::new(&p, 1.0 / 50.0))?;
    let d = rel_l2(&g, traj.at(10))?;
    Ok((d <= 1e-6, format!("relative L2 difference {d:.3e} at step 10")))
}

fn rel_l2(a: &FemFunction<f64>, b: &FemFunction<f64>) -> Result<f64> {
    let ops = assemble_operators::<f64>(&b.mesh, 0.0)?;
    Ok(norms(&a.sub(b)?, &ops)?.0 / norms(b, &ops)?.0)
}

fn mittag_leffler() -> Result<(bool, String)> {
    let def = ProblemDef {
        rho: [parse_expr("-1")?, parse_expr("0")?],
        u: parse_expr("1")?,
        g0: parse_expr("sin(pi*x)")?,
        f: None,
    };
    let p = def.build::<f64>(0.5, 1.0);
    let exact = ml_reference(&p, 1.0, 1)?;
    let mesh = Mesh1D::unit(256)?;
    let ops = assemble_operators::<f64>(&mesh, 0.0)?;
    let g = run_corrected(&p, 3, 800, &mesh)?;
    let e = norms(&g.last().sub(&FemFunction::interpolate(&mesh, &exact))?, &ops)?.0;
    Ok((e <= 1e-5, format!("L2 error {e:.3e} (alpha = 0.5, k = 3, tau = 1/800, h = 1/256)")))
}

/// Oracle checks run by `fracfk verify`.
pub fn verify_suite() -> Vec<Check> {
    vec![
        check("grunwald weights", grunwald()),
        check("dft weights", dft()),
        check("symbol defects", symbols()),
        check("contour equivalence", contour()),
        check("mittag-leffler reference", mittag_leffler()),
    ]
}
