use num_complex::Complex;

use crate::numerics::Real;

/// A function of the space variable, complex valued. Smooth between its
/// declared breakpoints.
pub trait SpatialFn<R: Real>: Send + Sync {
    fn eval(&self, x: R) -> Complex<R>;

    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// True only when the function is known to vanish identically.
    fn is_zero(&self) -> bool {
        false
    }
}

impl<R: Real, F> SpatialFn<R> for F
where
    F: Fn(R) -> Complex<R> + Send + Sync,
{
    fn eval(&self, x: R) -> Complex<R> {
        self(x)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroFn;

impl<R: Real> SpatialFn<R> for ZeroFn {
    fn eval(&self, _: R) -> Complex<R> {
        Complex::new(R::zero(), R::zero())
    }

    fn is_zero(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConstFn<R>(pub Complex<R>);

impl<R: Real> SpatialFn<R> for ConstFn<R> {
    fn eval(&self, _: R) -> Complex<R> {
        self.0
    }

    fn is_zero(&self) -> bool {
        self.0.re == R::zero() && self.0.im == R::zero()
    }
}

/// Closure with explicit breakpoints.
pub struct Piecewise<F> {
    pub f: F,
    pub breakpoints: Vec<f64>,
}

impl<F> Piecewise<F> {
    pub fn new(f: F, breakpoints: Vec<f64>) -> Self {
        Self { f, breakpoints }
    }
}

impl<R: Real, F> SpatialFn<R> for Piecewise<F>
where
    F: Fn(R) -> Complex<R> + Send + Sync,
{
    fn eval(&self, x: R) -> Complex<R> {
        (self.f)(x)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

/// Characteristic function of the open interval (a, b).
pub fn chi<R: Real>(a: f64, b: f64, x: R) -> R {
    if x > R::from_f64(a) && x < R::from_f64(b) {
        R::one()
    } else {
        R::zero()
    }
}
