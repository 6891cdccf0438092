use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{Axis, RunConfig};
use crate::error::{Error, Result};
use crate::fem::{assemble_operators, norms, transfer, FemFunction, Mesh1D};
use crate::numerics::{DoubleDouble, Precision, Real};
use crate::scheme::{run, ProblemSpec};

pub const CSV_HEADER: &str = "alpha,k,inv_tau,inv_h,norm,error,rate";

/// `log2(E_i / E_{i+1})` for consecutive entries.
pub fn compute_rates(errors: &[f64]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    if let Some(&e) = errors.iter().find(|&&e| !(e > 0.0 && e.is_finite())) {
        return Err(Error::NonPositiveError(e));
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    L2,
    H1,
}

impl Norm {
    pub fn label(self) -> &'static str {
        match self {
            Norm::L2 => "L2",
            Norm::H1 => "H1",
        }
    }
}

/// Errors and rates of one (alpha, k, norm) row of a study.
#[derive(Clone, Debug, PartialEq)]
pub struct RateTable {
    pub alpha: f64,
    pub k: usize,
    pub norm: Norm,
    pub precision: Precision,
    /// Listed grid values (1/tau or 1/h).
    pub grid: Vec<usize>,
    /// `errors[i]` compares grid i with grid i + 1 (or the reference refinement).
    pub errors: Vec<Option<f64>>,
    /// `rates[i]` belongs to the pair (errors[i], errors[i + 1]).
    pub rates: Vec<Option<f64>>,
    /// Std64 run at a resolution where roundoff dominates.
    pub flagged: bool,
}

impl RateTable {
    /// Rate at the finest pair.
    pub fn summary_rate(&self) -> Option<f64> {
        self.rates.last().copied().flatten()
    }
}

fn pair_rates(errors: &[Option<f64>]) -> Vec<Option<f64>> {
    errors
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => compute_rates(&[a, b]).ok().map(|r| r[0]),
            _ => None,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellFailure {
    pub alpha: f64,
    pub k: usize,
    pub grid: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct StudyReport {
    pub name: String,
    pub axis: Axis,
    pub tables: Vec<RateTable>,
    pub warnings: Vec<String>,
    pub failures: Vec<CellFailure>,
}

impl StudyReport {
    pub fn table(&self, alpha: f64, k: usize, norm: Norm) -> Option<&RateTable> {
        self.tables.iter().find(|t| t.alpha == alpha && t.k == k && t.norm == norm)
    }

    pub fn csv(&self, cfg: &RunConfig) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for t in &self.tables {
            for (i, &g) in t.grid.iter().enumerate() {
                let (it, ih) = match cfg.axis {
                    Axis::Time => (g, cfg.inv_h[0]),
                    Axis::Space => (cfg.inv_tau[0], g),
                };
                let err = t.errors[i].map(|e| format!("{e:e}")).unwrap_or_default();
                let rate = if i == 0 { None } else { t.rates[i - 1] };
                let rate = rate.map(|r| r.to_string()).unwrap_or_default();
                let _ = writeln!(out, "{},{},{},{},{},{},{}", t.alpha, t.k, it, ih, t.norm.label(), err, rate);
            }
        }
        out
    }

    pub fn markdown(&self, cfg: &RunConfig) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}\n", self.name);
        let fixed = match cfg.axis {
            Axis::Time => format!("h = 1/{}", cfg.inv_h[0]),
            Axis::Space => format!("tau = 1/{}", cfg.inv_tau[0]),
        };
        let _ = writeln!(out, "Scheme `{}`, {}, errors at t = {}.\n", cfg.scheme.label(), fixed, cfg.t_eval);
        let head = match cfg.axis {
            Axis::Time => "1/τ",
            Axis::Space => "1/h",
        };
        for norm in [Norm::L2, Norm::H1] {
            let rows: Vec<&RateTable> = self.tables.iter().filter(|t| t.norm == norm).collect();
            let Some(first) = rows.first() else { continue };
            let _ = writeln!(out, "## {} errors\n", norm.label());
            let _ = write!(out, "| α | k \\ {head} |");
            for g in &first.grid {
                let _ = write!(out, " {g} |");
            }
            let _ = writeln!(out, " Rate | Precision |");
            let _ = writeln!(out, "|---|---|{}---|---|", "---|".repeat(first.grid.len()));
            for (i, t) in rows.iter().enumerate() {
                let alpha = if i == 0 || rows[i - 1].alpha != t.alpha { t.alpha.to_string() } else { String::new() };
                let _ = write!(out, "| {alpha} | {} |", t.k);
                for e in &t.errors {
                    let _ = write!(out, " {} |", e.map(sci).unwrap_or_else(|| "failed".into()));
                }
                let rate = t.summary_rate().map(|r| format!("≈ {r:.4}")).unwrap_or_else(|| "n/a".into());
                let flag = if t.flagged { " (roundoff)" } else { "" };
                let _ = writeln!(out, " {rate} | {}{flag} |", t.precision.label());
            }
            out.push('\n');
        }
        if !self.warnings.is_empty() || !self.failures.is_empty() {
            let _ = writeln!(out, "## Notes\n");
            for w in &self.warnings {
                let _ = writeln!(out, "- {w}");
            }
            for f in &self.failures {
                let _ = writeln!(out, "- failed: alpha={} k={} grid=1/{}: {}", f.alpha, f.k, f.grid, f.message);
            }
        }
        out
    }

    /// Writes `<name>.csv` and `<name>.md` into `dir`.
    pub fn write(&self, cfg: &RunConfig, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let csv = dir.join(format!("{}.csv", self.name));
        let md = dir.join(format!("{}.md", self.name));
        std::fs::write(&csv, self.csv(cfg)).map_err(|e| Error::Io(format!("{}: {e}", csv.display())))?;
        std::fs::write(&md, self.markdown(cfg)).map_err(|e| Error::Io(format!("{}: {e}", md.display())))?;
        Ok((csv, md))
    }
}

/// `1.3916E-06` style.
fn sci(e: f64) -> String {
    let s = format!("{e:.4E}");
    match s.split_once('E') {
        Some((m, x)) => {
            let x: i32 = x.parse().unwrap_or(0);
            format!("{m}E{}{:02}", if x < 0 { '-' } else { '+' }, x.abs())
        }
        None => s,
    }
}

fn solve_cell<R: Real>(cfg: &RunConfig, p: &ProblemSpec<R>, k: usize, g: usize) -> Result<FemFunction<R>> {
    let (inv_tau, inv_h) = match cfg.axis {
        Axis::Time => (g, cfg.inv_h[0]),
        Axis::Space => (cfg.inv_tau[0], g),
    };
    let n_steps = (cfg.t_final * inv_tau as f64).round() as usize;
    let level = (cfg.t_eval * inv_tau as f64).round() as usize;
    let mesh = Mesh1D::unit(inv_h)?;
    let traj = run(p, k, n_steps, &mesh, cfg.scheme)?;
    Ok(traj.at(level).clone())
}

fn difference_norms<R: Real>(coarse: &FemFunction<R>, fine: &FemFunction<R>, axis: Axis) -> Result<(f64, f64)> {
    let d = match axis {
        Axis::Time => coarse.sub(fine)?,
        Axis::Space => transfer(coarse, &fine.mesh)?.sub(fine)?,
    };
    let ops = assemble_operators::<R>(&fine.mesh, R::zero())?;
    let (l2, h1) = norms(&d, &ops)?;
    Ok((l2.to_f64(), h1.to_f64()))
}

struct Group {
    tables: Vec<RateTable>,
    failures: Vec<CellFailure>,
}

fn run_group<R: Real>(cfg: &RunConfig, alpha: f64, k: usize) -> Group {
    let p = cfg.problem.build::<R>(alpha, cfg.t_final);
    let grid = cfg.grid_with_reference();
    let sols: Vec<Result<FemFunction<R>>> = grid.par_iter().map(|&g| solve_cell(cfg, &p, k, g)).collect();
    let mut failures = Vec::new();
    for (g, s) in grid.iter().zip(&sols) {
        if let Err(e) = s {
            failures.push(CellFailure { alpha, k, grid: *g, message: e.to_string() });
        }
    }
    let listed = cfg.grid().len();
    let mut l2 = Vec::with_capacity(listed);
    let mut h1 = Vec::with_capacity(listed);
    for i in 0..listed {
        let pair = match (&sols[i], &sols[i + 1]) {
            (Ok(a), Ok(b)) => match difference_norms(a, b, cfg.axis) {
                Ok(v) => Some(v),
                Err(e) => {
                    failures.push(CellFailure { alpha, k, grid: grid[i], message: e.to_string() });
                    None
                }
            },
            _ => None,
        };
        l2.push(pair.map(|v| v.0));
        h1.push(pair.map(|v| v.1));
    }
    let precision = R::PRECISION;
    let flagged = cfg.axis == Axis::Time
        && precision == Precision::Standard64
        && k >= 5
        && cfg.inv_tau.iter().any(|&n| n >= 400);
    let mut tables = vec![table(alpha, k, Norm::L2, precision, cfg.grid(), l2, flagged)];
    if cfg.axis == Axis::Space {
        tables.push(table(alpha, k, Norm::H1, precision, cfg.grid(), h1, flagged));
    }
    Group { tables, failures }
}

fn table(
    alpha: f64,
    k: usize,
    norm: Norm,
    precision: Precision,
    grid: &[usize],
    errors: Vec<Option<f64>>,
    flagged: bool,
) -> RateTable {
    let rates = pair_rates(&errors);
    RateTable { alpha, k, norm, precision, grid: grid.to_vec(), errors, rates, flagged }
}

/// Runs every (alpha, k, grid) cell plus one reference refinement per
/// (alpha, k). Cells run concurrently; output order is fixed.
pub fn run_study(cfg: &RunConfig) -> StudyReport {
    let cells: Vec<(f64, usize)> = cfg.alphas.iter().flat_map(|&a| cfg.ks.iter().map(move |&k| (a, k))).collect();
    let groups: Vec<Group> = cells
        .par_iter()
        .map(|&(a, k)| match cfg.precision_for(k) {
            Precision::Standard64 => run_group::<f64>(cfg, a, k),
            Precision::Extended => run_group::<DoubleDouble>(cfg, a, k),
        })
        .collect();
    let mut tables = Vec::new();
    let mut failures = Vec::new();
    let mut warnings = Vec::new();
    for g in groups {
        for t in &g.tables {
            if t.flagged && t.norm == Norm::L2 {
                warnings.push(format!(
                    "alpha={} k={}: std64 with 1/tau >= 400 reaches the binary64 roundoff floor; use extended precision",
                    t.alpha, t.k
                ));
            }
        }
        tables.extend(g.tables);
        failures.extend(g.failures);
    }
    StudyReport { name: cfg.name.clone(), axis: cfg.axis, tables, warnings, failures }
}

/// Recomputes the rate column of an emitted CSV from its error column.
pub fn rerate_csv(csv: &str) -> Result<String> {
    let mut lines = csv.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        _ => return Err(Error::InvalidArgument("missing CSV header".into())),
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let mut prev: Option<(String, Option<f64>)> = None;
    for (n, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 7 {
            return Err(Error::InvalidArgument(format!("row {}: expected 7 columns", n + 1)));
        }
        let key = format!("{},{},{}", cols[0], cols[1], cols[4]);
        let err = if cols[5].is_empty() {
            None
        } else {
            Some(cols[5].parse::<f64>().map_err(|e| Error::InvalidArgument(format!("row {}: {e}", n + 1)))?)
        };
        let rate = match &prev {
            Some((k, pe)) if *k == key => pair_rates(&[*pe, err])[0],
            _ => None,
        };
        let rate = rate.map(|r| r.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{},{},{}", cols[0], cols[1], cols[2], cols[3], cols[4], cols[5], rate);
        prev = Some((key, err));
    }
    Ok(out)
}
