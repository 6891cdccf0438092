//! Double-double arithmetic: an unevaluated sum `hi + lo` of two binary64
//! values with |lo| <= ulp(hi)/2, giving roughly 106 bits of significand.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{Num, One, Zero};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[allow(clippy::approx_constant, clippy::excessive_precision)]
pub const DD_PI: DoubleDouble = DoubleDouble::new(3.141592653589793116e+00, 1.224646799147353207e-16);
#[allow(clippy::approx_constant, clippy::excessive_precision)]
pub const DD_HALF_PI: DoubleDouble =
    DoubleDouble::new(1.570796326794896558e+00, 6.123233995736766036e-17);
#[allow(clippy::approx_constant, clippy::excessive_precision)]
pub const DD_LN2: DoubleDouble = DoubleDouble::new(6.931471805599452862e-01, 2.319046813846299558e-17);
/// 2^-104.
pub const DD_EPSILON: f64 = 4.930380657631324e-32;

impl DoubleDouble {
    pub const ZERO: Self = Self::new(0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0);

    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact for |n| < 2^106.
    pub fn from_i64(n: i64) -> Self {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        let (s, e) = quick_two_sum(hi, lo);
        Self::new(s, e)
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b);
        p2 += self.lo * b;
        let (s, e) = quick_two_sum(p1, p2);
        Self::new(s, e)
    }

    #[inline]
    fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Self::new(self.hi * f, self.lo * f)
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    pub fn sqr(self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, self.hi);
        p2 += 2.0 * self.hi * self.lo;
        p2 += self.lo * self.lo;
        let (s, e) = quick_two_sum(p1, p2);
        Self::new(s, e)
    }

    pub fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            let (s, e) = quick_two_sum(hi, self.lo.floor());
            Self::new(s, e)
        } else {
            Self::new(hi, 0.0)
        }
    }

    pub fn round(self) -> Self {
        let hi = self.hi.round();
        if hi == self.hi {
            let (s, e) = quick_two_sum(hi, self.lo.round());
            Self::new(s, e)
        } else if (hi - self.hi).abs() == 0.5 {
            // tie in hi: lo decides the direction
            if self.lo > 0.0 && hi < self.hi {
                Self::new(hi + 1.0, 0.0)
            } else if self.lo < 0.0 && hi > self.hi {
                Self::new(hi - 1.0, 0.0)
            } else {
                Self::new(hi, 0.0)
            }
        } else {
            Self::new(hi, 0.0)
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            if self.hi == 0.0 {
                return Self::ZERO;
            }
            return Self::from_f64(f64::NAN);
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let diff = self - Self::from_f64(ax).sqr();
        let (s, e) = two_sum(ax, diff.hi * x * 0.5);
        Self::new(s, e)
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Self::ONE;
        }
        let k = (self.hi / DD_LN2.hi).round();
        let r = (self - DD_LN2.mul_f64(k)).ldexp(-9);
        // expm1 of the reduced argument, |r| < 2^-9 * ln2 / 2
        let mut term = r;
        let mut sum = r;
        let mut n = 1.0;
        loop {
            n += 1.0;
            term = term * r / Self::from_f64(n);
            sum += term;
            if term.hi.abs() <= 1e-34 * sum.hi.abs().max(1e-300) {
                break;
            }
        }
        for _ in 0..9 {
            sum = sum.mul_f64(2.0) + sum.sqr();
        }
        (sum + Self::ONE).ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        if self.hi == 1.0 && self.lo == 0.0 {
            return Self::ZERO;
        }
        // one Newton step on exp(y) = x doubles the f64 accuracy
        let y = Self::from_f64(self.hi.ln());
        y + (self * (-y).exp() - Self::ONE)
    }

    /// sin and cos of the same argument.
    pub fn sin_cos(self) -> (Self, Self) {
        if self.hi == 0.0 && self.lo == 0.0 {
            return (Self::ZERO, Self::ONE);
        }
        let j = (self / DD_HALF_PI).round();
        let r = self - DD_HALF_PI * j;
        let r2 = r.sqr();
        // Taylor series on |r| <= pi/4
        let mut s = r;
        let mut c = Self::ONE;
        let mut ts = r;
        let mut tc = Self::ONE;
        let mut n = 1.0;
        loop {
            tc = -(tc * r2) / Self::from_f64(n * (n + 1.0));
            ts = -(ts * r2) / Self::from_f64((n + 1.0) * (n + 2.0));
            n += 2.0;
            c += tc;
            s += ts;
            if tc.hi.abs() < 1e-35 && ts.hi.abs() < 1e-35 * r.hi.abs().max(1e-300) {
                break;
            }
            if n > 80.0 {
                break;
            }
        }
        match (j.hi.rem_euclid(4.0)) as i64 {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn powf(self, e: Self) -> Self {
        if e.hi == 0.0 && e.lo == 0.0 {
            return Self::ONE;
        }
        (e * self.ln()).exp()
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::ONE / self } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            k >>= 1;
        }
        acc
    }

    /// Parses a plain or scientific decimal literal exactly up to the
    /// double-double rounding of the final division.
    pub fn parse_decimal(text: &str) -> Option<Self> {
        let text = text.trim();
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.strip_prefix('+').unwrap_or(text)),
        };
        let (mantissa, exp_part) = match body.find(['e', 'E']) {
            Some(pos) => (&body[..pos], body[pos + 1..].parse::<i32>().ok()?),
            None => (body, 0),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let mut value = Self::ZERO;
        let ten = Self::from_f64(10.0);
        for ch in int_part.chars().chain(frac_part.chars()) {
            let digit = ch.to_digit(10)?;
            value = value * ten + Self::from_f64(digit as f64);
        }
        let scale = exp_part - frac_part.len() as i32;
        if scale > 0 {
            value *= ten.powi(scale);
        } else if scale < 0 {
            value /= ten.powi(-scale);
        }
        Some(if neg { -value } else { value })
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.hi, -self.lo)
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self::new(hi, lo)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self::new(hi, lo)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self::new(q1, q2) + Self::from_f64(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        let q = self / b;
        let q = if q.hi < 0.0 { -(-q).floor() } else { q.floor() };
        self - q * b
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for DoubleDouble {
            #[inline]
            fn $m(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /, RemAssign rem_assign %);

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::ONE
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = &'static str;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err("only radix 10 is supported");
        }
        Self::parse_decimal(s).ok_or("invalid decimal literal")
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl fmt::LowerExp for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerExp::fmt(&self.to_f64(), f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::from_f64(x)
    }

    #[test]
    fn tiny_increment_survives() {
        let x = dd(1.0) + dd(2f64.powi(-60));
        assert!(x != dd(1.0));
        assert_eq!((x - dd(1.0)).hi, 2f64.powi(-60));
    }

    #[test]
    fn pi_constant_is_consistent() {
        // sin(pi) in double-double is the truncation error of the constant
        let (s, c) = DD_PI.sin_cos();
        assert!(s.hi.abs() < 1e-31, "{s:?}");
        assert!((c + dd(1.0)).hi.abs() < 1e-31);
    }

    #[test]
    fn exp_ln_roundtrip() {
        for &v in &[1e-5, 0.1, 0.5, 1.0, 2.0, 7.5, 100.0] {
            let x = DoubleDouble::parse_decimal(&format!("{v}")).unwrap();
            let back = x.exp().ln();
            assert!((back - x).abs().hi < 1e-30 * x.hi.abs().max(1.0), "{v}: {back:?}");
        }
    }

    #[test]
    fn exp_of_one_matches_e() {
        // e = 2.718281828459045 + 1.4456468917292502e-16
        let e = dd(1.0).exp();
        assert_eq!(e.hi, std::f64::consts::E);
        assert!((e.lo - 1.4456468917292502e-16).abs() < 1e-31);
    }

    #[test]
    fn sqrt_squares_back() {
        let two = dd(2.0);
        let r = two.sqrt();
        assert!((r.sqr() - two).abs().hi < 1e-31);
    }

    #[test]
    fn sin_cos_pythagoras() {
        for &v in &[0.1, 1.0, 2.5, -4.0, 30.0] {
            let (s, c) = dd(v).sin_cos();
            let one = s.sqr() + c.sqr();
            assert!((one - dd(1.0)).abs().hi < 1e-30);
            assert!((s.hi - v.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn decimal_parse_tenth() {
        let t = DoubleDouble::parse_decimal("0.1").unwrap();
        let ten_t = t * dd(10.0);
        assert!((ten_t - dd(1.0)).abs().hi < 1e-31);
        assert_eq!(DoubleDouble::parse_decimal("2.5e1").unwrap(), dd(25.0));
        assert!(DoubleDouble::parse_decimal("abc").is_none());
    }

    #[test]
    fn powf_matches_integer_power() {
        let x = dd(1.7);
        let p = x.powf(dd(3.0));
        assert!((p - x * x * x).abs().hi < 1e-30);
    }
}
