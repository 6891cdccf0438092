use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::expr::{parse_expr, ExprAst};
use crate::error::{Error, Result};
use crate::fem::{Mesh1D, SpatialFn};
use crate::numerics::{Precision, Real};
use crate::scheme::{ProblemSpec, SourceTerm, TimeProfile, Variant};

/// Number given either as a JSON number or as a constant expression such as `"pi"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeKind {
    #[serde(rename = "expRhoU")]
    ExpRhoU,
    #[serde(rename = "one")]
    One,
    #[serde(rename = "exp")]
    Exp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Pair([Scalar; 2]),
    Real(Scalar),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeFile {
    pub kind: TimeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<ComplexValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceFile {
    pub spatial: String,
    pub time: TimeFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "U")]
    pub u: String,
    #[serde(rename = "G0")]
    pub g0: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<SourceFile>,
}

/// Raw JSON document. Every field is optional so that a preset can supply
/// the defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<OneOrMany<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<[Scalar; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<OneOrMany<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv_tau: Option<OneOrMany<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv_h: Option<OneOrMany<usize>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_eval: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<Precision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemFile>,
}

impl ConfigFile {
    fn overlay(self, top: ConfigFile) -> ConfigFile {
        ConfigFile {
            name: top.name.or(self.name),
            preset: top.preset.or(self.preset),
            alpha: top.alpha.or(self.alpha),
            rho: top.rho.or(self.rho),
            k: top.k.or(self.k),
            inv_tau: top.inv_tau.or(self.inv_tau),
            inv_h: top.inv_h.or(self.inv_h),
            t_final: top.t_final.or(self.t_final),
            t_eval: top.t_eval.or(self.t_eval),
            precision: top.precision.or(self.precision),
            scheme: top.scheme.or(self.scheme),
            problem: top.problem.or(self.problem),
        }
    }
}

/// Refinement direction of a study.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Time,
    Space,
}

impl Axis {
    pub fn label(self) -> &'static str {
        match self {
            Axis::Time => "tau",
            Axis::Space => "h",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TimeDef {
    ExpRhoU,
    One,
    Exp([ExprAst; 2]),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SourceDef {
    pub spatial: ExprAst,
    pub time: TimeDef,
}

/// Parsed problem data; instantiated per precision by [`ProblemDef::build`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemDef {
    pub rho: [ExprAst; 2],
    pub u: ExprAst,
    pub g0: ExprAst,
    pub f: Option<SourceDef>,
}

fn constant<R: Real>(e: &ExprAst) -> R {
    e.eval(R::zero())
}

impl ProblemDef {
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.u.breakpoints();
        b.extend(self.g0.breakpoints());
        if let Some(f) = &self.f {
            b.extend(f.spatial.breakpoints());
        }
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.dedup();
        b
    }

    pub fn build<R: Real>(&self, alpha: f64, t_final: f64) -> ProblemSpec<R> {
        let alpha = R::parse_decimal(&alpha.to_string()).unwrap_or_else(|| R::from_f64(alpha));
        let rho = Complex::new(constant::<R>(&self.rho[0]), constant::<R>(&self.rho[1]));
        let u: Arc<dyn SpatialFn<R>> = Arc::new(self.u.compile::<R>());
        let g0: Arc<dyn SpatialFn<R>> = Arc::new(self.g0.compile::<R>());
        let mut p = ProblemSpec::new(alpha, rho, u, g0);
        p.t_final = R::parse_decimal(&t_final.to_string()).unwrap_or_else(|| R::from_f64(t_final));
        if let Some(f) = &self.f {
            let spatial: Arc<dyn SpatialFn<R>> = Arc::new(f.spatial.compile::<R>());
            let source = match &f.time {
                TimeDef::ExpRhoU => SourceTerm::ExpRhoU { spatial },
                TimeDef::One => SourceTerm::Separable { spatial, time: TimeProfile::One },
                TimeDef::Exp(c) => SourceTerm::Separable {
                    spatial,
                    time: TimeProfile::Exp(Complex::new(constant::<R>(&c[0]), constant::<R>(&c[1]))),
                },
            };
            if !f.spatial.compile::<R>().is_zero() {
                p = p.with_source(source);
            }
        }
        p
    }
}

/// Validated study description.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub alphas: Vec<f64>,
    pub ks: Vec<usize>,
    pub inv_tau: Vec<usize>,
    pub inv_h: Vec<usize>,
    pub t_final: f64,
    pub t_eval: f64,
    pub precision: Option<Precision>,
    pub scheme: Variant,
    pub problem: ProblemDef,
    pub axis: Axis,
}

impl RunConfig {
    /// Precision of the (alpha, k) cell: the explicit choice, else extended for k >= 5.
    pub fn precision_for(&self, k: usize) -> Precision {
        self.precision.unwrap_or(if k >= 5 { Precision::Extended } else { Precision::Standard64 })
    }

    /// Listed grid values followed by the reference refinement.
    pub fn grid_with_reference(&self) -> Vec<usize> {
        let mut g = match self.axis {
            Axis::Time => self.inv_tau.clone(),
            Axis::Space => self.inv_h.clone(),
        };
        g.push(2 * g.last().copied().unwrap_or(1));
        g
    }

    /// Rejects scheme variants whose data preconditions the problem violates.
    pub fn check_scheme(&self) -> Result<()> {
        let has_source = self.problem.f.as_ref().is_some_and(|f| !f.spatial.compile::<f64>().is_zero());
        let has_initial = !self.problem.g0.compile::<f64>().is_zero();
        match self.scheme {
            Variant::ComparisonInitial if has_source => Err(Error::NonzeroSourceUnsupported),
            Variant::ComparisonSource if has_initial => Err(Error::NonzeroInitialUnsupported),
            _ => Ok(()),
        }
    }

    pub fn grid(&self) -> &[usize] {
        match self.axis {
            Axis::Time => &self.inv_tau,
            Axis::Space => &self.inv_h,
        }
    }
}

const PRESETS: [(&str, &str, &str); 5] = [
    (
        "example1",
        "nonsmooth initial data, temporal orders",
        r#"{"alpha":[0.3,0.7],"rho":[-1,0],"k":[2,3,4,5,6],"inv_tau":[50,100,200,400,800],"inv_h":[100],"T":1,
            "scheme":"corrected","problem":{"U":"chi(0.5,1)","G0":"x*(1-x)"}}"#,
    ),
    (
        "example2",
        "source term, temporal orders",
        r#"{"alpha":[0.4,0.6],"rho":[-1,0],"k":[2,3,4,5,6],"inv_tau":[50,100,200,400,800],"inv_h":[100],"T":1,
            "scheme":"corrected","problem":{"U":"chi(0.5,1)","G0":"0",
            "f":{"spatial":"x*(1-x)","time":{"kind":"expRhoU"}}}}"#,
    ),
    (
        "example3",
        "discontinuous initial data, spatial orders",
        r#"{"alpha":[0.3,0.8],"rho":[-1,"pi"],"k":[2,3,4,5,6],"inv_tau":[200],"inv_h":[20,40,80,160,320],"T":1,
            "scheme":"corrected","problem":{"U":"3*(x+0.5)^5*chi(0,0.5)","G0":"-5*chi(0,0.5) + 5*chi(0.5,1)"}}"#,
    ),
    (
        "example3-fine",
        "discontinuous initial data, fine meshes, projected comparison scheme",
        r#"{"alpha":[0.3],"rho":[-1,"pi"],"k":[2,3,4,5,6],"inv_tau":[200],"inv_h":[256,512,1024,2048,4096],"T":1,
            "scheme":"comparison_initial","problem":{"U":"3*(x+0.5)^5*chi(0,0.5)","G0":"-5*chi(0,0.5) + 5*chi(0.5,1)"}}"#,
    ),
    (
        "example4",
        "source term, spatial orders",
        r#"{"alpha":[0.3,0.6],"rho":[-1,1],"k":[2,3,4,5,6],"inv_tau":[200],"inv_h":[20,40,80,160,320],"T":1,
            "scheme":"corrected","problem":{"U":"chi(0.5,1)","G0":"0",
            "f":{"spatial":"x*(1-x)","time":{"kind":"expRhoU"}}}}"#,
    ),
];

/// `(name, description)` of every built-in preset.
pub fn preset_names() -> Vec<(&'static str, &'static str)> {
    PRESETS.iter().map(|(n, d, _)| (*n, *d)).collect()
}

pub fn preset(name: &str) -> Option<ConfigFile> {
    PRESETS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, _, json)| serde_json::from_str(json).expect("built-in preset is valid"))
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::SchemaError { path: path.to_string(), message: message.into() }
}

fn constant_expr(path: &str, s: &Scalar) -> Result<ExprAst> {
    let e = match s {
        Scalar::Number(v) => {
            let text = v.to_string();
            if *v < 0.0 {
                ExprAst::Neg(Box::new(ExprAst::Num(text[1..].to_string())))
            } else {
                ExprAst::Num(text)
            }
        }
        Scalar::Text(t) => parse_expr(t).map_err(|e| schema(path, e.to_string()))?,
    };
    if e.depends_on_x() {
        return Err(schema(path, "constant must not depend on x"));
    }
    if !e.eval(0.0f64).is_finite() {
        return Err(schema(path, "constant is not finite"));
    }
    Ok(e)
}

fn spatial_expr(path: &str, s: &str) -> Result<ExprAst> {
    parse_expr(s).map_err(|e| match e {
        Error::ExprParse { offset, message } => Error::ExprParse { offset, message: format!("{path}: {message}") },
        other => other,
    })
}

fn dyadic(path: &str, v: &[usize]) -> Result<()> {
    if v.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(schema(path, "grid values must double between consecutive entries"));
    }
    Ok(())
}

fn positive_list(path: &str, v: &[usize]) -> Result<()> {
    if v.is_empty() {
        return Err(schema(path, "list must not be empty"));
    }
    if let Some(i) = v.iter().position(|&x| x == 0) {
        return Err(schema(&format!("{path}[{i}]"), "must be a positive integer"));
    }
    Ok(())
}

/// Parses and validates a JSON configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ConfigFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(&path, e.into_inner().to_string())
    })?;
    resolve(file)
}

/// Applies the preset (if any) underneath the explicit fields and validates.
pub fn resolve(file: ConfigFile) -> Result<RunConfig> {
    let merged = match &file.preset {
        Some(p) => preset(p).ok_or_else(|| schema("preset", format!("unknown preset '{p}'")))?.overlay(file),
        None => file,
    };
    let name = merged.name.clone().or(merged.preset.clone()).unwrap_or_else(|| "study".to_string());
    if name.is_empty() || name.contains(['/', '\\']) {
        return Err(schema("name", "must be a plain file stem"));
    }
    let alphas = merged.alpha.as_ref().ok_or_else(|| schema("alpha", "missing field"))?.to_vec();
    if alphas.is_empty() {
        return Err(schema("alpha", "list must not be empty"));
    }
    if let Some(&a) = alphas.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
        return Err(Error::AlphaOutOfRange(a));
    }
    let ks = merged.k.as_ref().ok_or_else(|| schema("k", "missing field"))?.to_vec();
    if ks.is_empty() {
        return Err(schema("k", "list must not be empty"));
    }
    if let Some(&k) = ks.iter().find(|&&k| !(1..=6).contains(&k)) {
        return Err(Error::UnsupportedOrder(k));
    }
    let inv_tau = merged.inv_tau.as_ref().ok_or_else(|| schema("inv_tau", "missing field"))?.to_vec();
    let inv_h = merged.inv_h.as_ref().ok_or_else(|| schema("inv_h", "missing field"))?.to_vec();
    positive_list("inv_tau", &inv_tau)?;
    positive_list("inv_h", &inv_h)?;
    let axis = match (inv_tau.len(), inv_h.len()) {
        (n, 1) if n >= 2 => Axis::Time,
        (1, n) if n >= 2 => Axis::Space,
        _ => {
            return Err(schema(
                "inv_tau",
                "exactly one of inv_tau and inv_h must list at least two values, the other exactly one",
            ))
        }
    };
    dyadic("inv_tau", &inv_tau)?;
    dyadic("inv_h", &inv_h)?;
    let t_final = merged.t_final.unwrap_or(1.0);
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(schema("T", "must be positive"));
    }
    let t_eval = merged.t_eval.unwrap_or(t_final);
    if !(t_eval > 0.0 && t_eval <= t_final) {
        return Err(schema("t_eval", "must lie in (0, T]"));
    }
    let rho = merged.rho.as_ref().ok_or_else(|| schema("rho", "missing field"))?;
    let rho = [constant_expr("rho[0]", &rho[0])?, constant_expr("rho[1]", &rho[1])?];
    let pf = merged.problem.as_ref().ok_or_else(|| schema("problem", "missing field"))?;
    let f = match &pf.f {
        None => None,
        Some(sf) => {
            let time = match (sf.time.kind, &sf.time.c) {
                (TimeKind::ExpRhoU, None) => TimeDef::ExpRhoU,
                (TimeKind::One, None) => TimeDef::One,
                (TimeKind::Exp, Some(ComplexValue::Pair([re, im]))) => {
                    TimeDef::Exp([constant_expr("problem.f.time.c[0]", re)?, constant_expr("problem.f.time.c[1]", im)?])
                }
                (TimeKind::Exp, Some(ComplexValue::Real(re))) => {
                    TimeDef::Exp([constant_expr("problem.f.time.c", re)?, ExprAst::Num("0".into())])
                }
                (TimeKind::Exp, None) => return Err(schema("problem.f.time.c", "required for kind \"exp\"")),
                (_, Some(_)) => return Err(schema("problem.f.time.c", "only allowed for kind \"exp\"")),
            };
            Some(SourceDef { spatial: spatial_expr("problem.f.spatial", &sf.spatial)?, time })
        }
    };
    let problem = ProblemDef {
        rho,
        u: spatial_expr("problem.U", &pf.u)?,
        g0: spatial_expr("problem.G0", &pf.g0)?,
        f,
    };
    let scheme = merged.scheme.unwrap_or(Variant::Corrected);
    let cfg = RunConfig {
        name,
        alphas,
        ks,
        inv_tau,
        inv_h,
        t_final,
        t_eval,
        precision: merged.precision,
        scheme,
        problem,
        axis,
    };
    check_grids(&cfg)?;
    cfg.check_scheme()?;
    Ok(cfg)
}

fn check_grids(cfg: &RunConfig) -> Result<()> {
    let bps = cfg.problem.breakpoints();
    let meshes = match cfg.axis {
        Axis::Time => cfg.inv_h.clone(),
        Axis::Space => cfg.grid_with_reference(),
    };
    for n in meshes {
        Mesh1D::unit(n)?.with_breakpoints(&bps)?;
    }
    let steps = match cfg.axis {
        Axis::Time => cfg.grid_with_reference(),
        Axis::Space => cfg.inv_tau.clone(),
    };
    for inv in steps {
        for (what, t) in [("T", cfg.t_final), ("t_eval", cfg.t_eval)] {
            let s = t * inv as f64;
            if (s - s.round()).abs() > 1e-9 * s.max(1.0) || s.round() < 1.0 {
                return Err(schema(what, format!("{what}={t} is not a whole number of steps of 1/{inv}")));
            }
        }
    }
    Ok(())
}
