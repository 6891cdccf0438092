use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{Num, NumAssign};
use serde::{Deserialize, Serialize};

use super::dd::{DoubleDouble, DD_EPSILON, DD_PI};

/// Arithmetic mode used by a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[serde(rename = "std64")]
    Standard64,
    Extended,
}

impl Precision {
    pub fn label(self) -> &'static str {
        match self {
            Precision::Standard64 => "std64",
            Precision::Extended => "extended",
        }
    }
}

/// Real scalar the solver is generic over: `f64` or [`DoubleDouble`].
pub trait Real:
    Copy
    + Send
    + Sync
    + 'static
    + Debug
    + Display
    + LowerExp
    + PartialOrd
    + Num
    + NumAssign
    + Neg<Output = Self>
    + Sum
{
    const PRECISION: Precision;

    fn from_f64(x: f64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn to_f64(self) -> f64;
    fn epsilon() -> Self;
    fn pi() -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn abs(self) -> Self;
    fn powf(self, e: Self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn round(self) -> Self;
    fn is_finite(self) -> bool;
    fn parse_decimal(text: &str) -> Option<Self>;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_usize(n: usize) -> Self {
        Self::from_i64(n as i64)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Standard64;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn powf(self, e: Self) -> Self {
        f64::powf(self, e)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn round(self) -> Self {
        f64::round(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn parse_decimal(text: &str) -> Option<Self> {
        text.trim().parse().ok()
    }
}

impl Real for DoubleDouble {
    const PRECISION: Precision = Precision::Extended;

    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    fn from_i64(n: i64) -> Self {
        DoubleDouble::from_i64(n)
    }
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    fn epsilon() -> Self {
        DoubleDouble::from_f64(DD_EPSILON)
    }
    fn pi() -> Self {
        DD_PI
    }
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
    fn exp(self) -> Self {
        DoubleDouble::exp(self)
    }
    fn ln(self) -> Self {
        DoubleDouble::ln(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        DoubleDouble::sin_cos(self)
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    fn powf(self, e: Self) -> Self {
        DoubleDouble::powf(self, e)
    }
    fn powi(self, n: i32) -> Self {
        DoubleDouble::powi(self, n)
    }
    fn round(self) -> Self {
        DoubleDouble::round(self)
    }
    fn is_finite(self) -> bool {
        DoubleDouble::is_finite(self)
    }
    fn parse_decimal(text: &str) -> Option<Self> {
        DoubleDouble::parse_decimal(text)
    }
}

pub type C<R> = Complex<R>;

#[inline]
pub fn cplx<R: Real>(re: R, im: R) -> Complex<R> {
    Complex::new(re, im)
}

#[inline]
pub fn creal<R: Real>(re: R) -> Complex<R> {
    Complex::new(re, R::zero())
}

#[inline]
pub fn cscale<R: Real>(z: Complex<R>, s: R) -> Complex<R> {
    Complex::new(z.re * s, z.im * s)
}

pub fn cabs<R: Real>(z: Complex<R>) -> R {
    let a = z.re.abs();
    let b = z.im.abs();
    let (big, small) = if a > b { (a, b) } else { (b, a) };
    if big == R::zero() {
        return R::zero();
    }
    let q = small / big;
    big * (R::one() + q * q).sqrt()
}

pub fn carg<R: Real>(z: Complex<R>) -> R {
    atan2(z.im, z.re)
}

/// Four-quadrant arctangent, refined by Newton steps on `sin_cos` so that it
/// carries the full precision of `R`.
pub fn atan2<R: Real>(y: R, x: R) -> R {
    if y == R::zero() && x == R::zero() {
        return R::zero();
    }
    let mut a = R::from_f64(y.to_f64().atan2(x.to_f64()));
    if R::PRECISION == Precision::Standard64 {
        return a;
    }
    let r = cabs(cplx(x, y));
    let (xn, yn) = (x / r, y / r);
    for _ in 0..2 {
        let (s, c) = a.sin_cos();
        // rotate the target by -a; its angle is the correction
        let dy = yn * c - xn * s;
        let dx = xn * c + yn * s;
        a += dy / dx;
    }
    a
}

pub fn cexp<R: Real>(z: Complex<R>) -> Complex<R> {
    let m = z.re.exp();
    if z.im == R::zero() {
        return Complex::new(m, R::zero());
    }
    let (s, c) = z.im.sin_cos();
    Complex::new(m * c, m * s)
}

/// Principal logarithm.
pub fn cln<R: Real>(z: Complex<R>) -> Complex<R> {
    Complex::new(cabs(z).ln(), carg(z))
}

/// Principal power `z^p` for real `p`.
pub fn cpow<R: Real>(z: Complex<R>, p: R) -> Complex<R> {
    if z.re == R::zero() && z.im == R::zero() {
        return Complex::new(R::zero(), R::zero());
    }
    if z.im == R::zero() && z.re > R::zero() {
        return Complex::new(z.re.powf(p), R::zero());
    }
    let l = cln(z);
    cexp(Complex::new(l.re * p, l.im * p))
}

pub fn to_c64<R: Real>(z: Complex<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}
