use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{FemFunction, SpatialFn, ZeroFn};
use crate::numerics::{cexp, cscale, Real};

/// A general source `f(x, t)` with its time derivatives at `t = 0`.
pub trait SourceFn<R: Real>: Send + Sync {
    fn eval(&self, x: R, t: R) -> Complex<R>;

    /// `d^l f / dt^l (x, 0)`, or `None` when not available.
    fn dt_at_zero(&self, l: usize, x: R) -> Option<Complex<R>>;

    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Time profile of a separable source `spatial(x) * theta(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeProfile<R: Real> {
    One,
    /// `exp(c t)`
    Exp(Complex<R>),
}

impl<R: Real> TimeProfile<R> {
    pub fn eval(&self, t: R) -> Complex<R> {
        match self {
            TimeProfile::One => Complex::new(R::one(), R::zero()),
            TimeProfile::Exp(c) => cexp(cscale(*c, t)),
        }
    }

    pub fn dt_at_zero(&self, l: usize) -> Complex<R> {
        match self {
            TimeProfile::One if l == 0 => Complex::new(R::one(), R::zero()),
            TimeProfile::One => Complex::new(R::zero(), R::zero()),
            TimeProfile::Exp(c) => c.powu(l as u32),
        }
    }
}

#[derive(Clone)]
pub enum SourceTerm<R: Real> {
    Zero,
    Separable { spatial: Arc<dyn SpatialFn<R>>, time: TimeProfile<R> },
    /// `spatial(x) * exp(-rho U(x) t)` with the problem's own rho and U.
    ExpRhoU { spatial: Arc<dyn SpatialFn<R>> },
    Custom(Arc<dyn SourceFn<R>>),
}

impl<R: Real> fmt::Debug for SourceTerm<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceTerm::Zero => write!(f, "Zero"),
            SourceTerm::Separable { time, .. } => write!(f, "Separable({time:?})"),
            SourceTerm::ExpRhoU { .. } => write!(f, "ExpRhoU"),
            SourceTerm::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl<R: Real> SourceTerm<R> {
    pub fn is_zero(&self) -> bool {
        match self {
            SourceTerm::Zero => true,
            SourceTerm::Separable { spatial, .. } | SourceTerm::ExpRhoU { spatial } => spatial.is_zero(),
            SourceTerm::Custom(_) => false,
        }
    }

    /// `f(x, t)`; `rho` and `u` are the problem's parameters at `x`.
    pub fn eval(&self, x: R, t: R, rho: Complex<R>, u: R) -> Complex<R> {
        match self {
            SourceTerm::Zero => Complex::new(R::zero(), R::zero()),
            SourceTerm::Separable { spatial, time } => spatial.eval(x) * time.eval(t),
            SourceTerm::ExpRhoU { spatial } => spatial.eval(x) * cexp(cscale(rho, -(t * u))),
            SourceTerm::Custom(s) => s.eval(x, t),
        }
    }

    pub fn dt_at_zero(&self, l: usize, x: R, rho: Complex<R>, u: R) -> Result<Complex<R>> {
        match self {
            SourceTerm::Zero => Ok(Complex::new(R::zero(), R::zero())),
            SourceTerm::Separable { spatial, time } => Ok(spatial.eval(x) * time.dt_at_zero(l)),
            SourceTerm::ExpRhoU { spatial } => Ok(spatial.eval(x) * cscale(-rho, u).powu(l as u32)),
            SourceTerm::Custom(s) => s.dt_at_zero(l, x).ok_or(Error::MissingDerivatives(l)),
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            SourceTerm::Zero => Vec::new(),
            SourceTerm::Separable { spatial, .. } | SourceTerm::ExpRhoU { spatial } => spatial.breakpoints(),
            SourceTerm::Custom(s) => s.breakpoints(),
        }
    }
}

/// Backward fractional Feynman-Kac problem on (0, L) with homogeneous
/// Dirichlet data.
#[derive(Clone)]
pub struct ProblemSpec<R: Real> {
    pub alpha: R,
    pub rho: Complex<R>,
    pub u: Arc<dyn SpatialFn<R>>,
    pub g0: Arc<dyn SpatialFn<R>>,
    pub source: SourceTerm<R>,
    pub t_final: R,
    pub length: f64,
}

impl<R: Real> fmt::Debug for ProblemSpec<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("alpha", &self.alpha)
            .field("rho", &self.rho)
            .field("source", &self.source)
            .field("t_final", &self.t_final)
            .field("length", &self.length)
            .finish_non_exhaustive()
    }
}

impl<R: Real> ProblemSpec<R> {
    /// Unit interval, T = 1, zero source.
    pub fn new(alpha: R, rho: Complex<R>, u: Arc<dyn SpatialFn<R>>, g0: Arc<dyn SpatialFn<R>>) -> Self {
        Self { alpha, rho, u, g0, source: SourceTerm::Zero, t_final: R::one(), length: 1.0 }
    }

    pub fn with_source(mut self, source: SourceTerm<R>) -> Self {
        self.source = source;
        self
    }

    pub fn zero_initial(&self) -> bool {
        self.g0.is_zero()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > R::zero() && self.alpha < R::one()) {
            return Err(Error::AlphaOutOfRange(self.alpha.to_f64()));
        }
        if !(self.t_final > R::zero() && self.t_final.is_finite()) {
            return Err(Error::InvalidProblem(format!("final time must be positive, got {}", self.t_final)));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::InvalidProblem(format!("domain length must be positive, got {}", self.length)));
        }
        if !(self.rho.re.is_finite() && self.rho.im.is_finite()) {
            return Err(Error::InvalidProblem("rho is not finite".into()));
        }
        Ok(())
    }

    /// Interior discontinuities of U, G0 and f.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.u.breakpoints();
        b.extend(self.g0.breakpoints());
        b.extend(self.source.breakpoints());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.dedup();
        b
    }
}

pub fn zero_fn<R: Real>() -> Arc<dyn SpatialFn<R>> {
    Arc::new(ZeroFn)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Corrected,
    Uncorrected,
    ComparisonInitial,
    ComparisonSource,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match self {
            Variant::Corrected => "corrected",
            Variant::Uncorrected => "uncorrected",
            Variant::ComparisonInitial => "comparison_initial",
            Variant::ComparisonSource => "comparison_source",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Variant::Corrected, Variant::Uncorrected, Variant::ComparisonInitial, Variant::ComparisonSource]
            .into_iter()
            .find(|v| v.label() == s)
    }
}

/// Numerical solution at every time level.
#[derive(Clone, Debug)]
pub struct Trajectory<R: Real> {
    pub tau: R,
    pub k: usize,
    pub variant: Variant,
    pub steps: Vec<FemFunction<R>>,
    /// Number of factorizations of the step matrix performed by the run.
    pub factorizations: usize,
}

impl<R: Real> Trajectory<R> {
    pub fn n_steps(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn last(&self) -> &FemFunction<R> {
        self.steps.last().expect("trajectory holds the initial level")
    }

    /// Level n with t_n = n tau.
    pub fn at(&self, n: usize) -> &FemFunction<R> {
        &self.steps[n]
    }
}
