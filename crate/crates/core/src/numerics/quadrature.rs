use crate::error::{Error, Result};

use super::scalar::Real;

/// Gauss-Legendre rule on the reference interval [0, 1].
#[derive(Clone, Debug)]
pub struct GaussRule<R: Real> {
    pub points: Vec<R>,
    pub weights: Vec<R>,
}

/// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
fn legendre<R: Real>(n: usize, x: R) -> (R, R) {
    let mut p0 = R::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, R::zero());
    }
    for j in 1..n {
        let jr = R::from_usize(j);
        let p2 = ((jr + jr + R::one()) * x * p1 - jr * p0) / (jr + R::one());
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

impl<R: Real> GaussRule<R> {
    /// `order`-point rule, exact for polynomials of degree <= 2*order - 1.
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("Gauss rule order must be positive".into()));
        }
        let n = order;
        let nr = R::from_usize(n);
        let mut points = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // Newton in f64 first, then polish in R
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, pm) = legendre::<f64>(n, x);
                let dp = n as f64 * (x * p - pm) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let mut xr = R::from_f64(x);
            let mut dp = R::one();
            for _ in 0..3 {
                let (p, pm) = legendre(n, xr);
                dp = nr * (xr * p - pm) / (xr * xr - R::one());
                xr -= p / dp;
            }
            let (p, pm) = legendre(n, xr);
            if p != R::zero() {
                dp = nr * (xr * p - pm) / (xr * xr - R::one());
            }
            let w = R::from_f64(2.0) / ((R::one() - xr * xr) * dp * dp);
            let half = R::from_ratio(1, 2);
            points.push((R::one() + xr) * half);
            weights.push(w * half);
        }
        // ascending order on [0, 1]
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| points[a].partial_cmp(&points[b]).unwrap());
        Ok(Self {
            points: idx.iter().map(|&i| points[i]).collect(),
            weights: idx.iter().map(|&i| weights[i]).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    /// Integral of `f` over [a, b].
    pub fn integrate<F: Fn(R) -> R>(&self, a: R, b: R, f: F) -> R {
        let h = b - a;
        let mut s = R::zero();
        for (x, w) in self.points.iter().zip(&self.weights) {
            s += *w * f(a + h * *x);
        }
        s * h
    }
}
