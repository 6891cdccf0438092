use num_complex::Complex;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::numerics::Real;

pub const MAX_ORDER: usize = 6;

pub(crate) fn check_order(k: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(k))
    }
}

fn binomial(n: i64, m: i64) -> i64 {
    (0..m).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub(crate) fn ratio_to<R: Real>(r: &Ratio<i64>) -> R {
    R::from_ratio(*r.numer(), *r.denom())
}

/// Generating polynomial of BDF-k, `sum_{i=1}^k (1 - z)^i / i`, stored as
/// exact ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BdfSymbol {
    pub k: usize,
    pub coeffs: Vec<Ratio<i64>>,
}

impl BdfSymbol {
    pub fn coeffs_as<R: Real>(&self) -> Vec<R> {
        self.coeffs.iter().map(ratio_to).collect()
    }

    /// Horner evaluation at a complex point.
    pub fn eval<R: Real>(&self, z: Complex<R>) -> Complex<R> {
        let mut acc = Complex::new(R::zero(), R::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex::new(ratio_to::<R>(c), R::zero());
        }
        acc
    }
}

pub fn bdf_symbol(k: usize) -> Result<BdfSymbol> {
    check_order(k)?;
    let mut coeffs = vec![Ratio::from_integer(0i64); k + 1];
    for i in 1..=k as i64 {
        for m in 0..=i {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            coeffs[m as usize] += Ratio::new(sign * binomial(i, m), i);
        }
    }
    Ok(BdfSymbol { k, coeffs })
}

/// Coefficients of `(delta_k(zeta) / tau)^gamma` up to index N.
#[derive(Clone, Debug)]
pub struct CqWeightTable<R: Real> {
    pub k: usize,
    pub gamma: R,
    pub tau: R,
    pub d: Vec<R>,
}

impl<R: Real> CqWeightTable<R> {
    /// d_m, with d_m = 0 for negative m.
    #[inline]
    pub fn get(&self, m: isize) -> R {
        if m < 0 {
            R::zero()
        } else {
            self.d[m as usize]
        }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }
}

/// Power-series coefficients of `p(z)^gamma` for a polynomial with p[0] != 0,
/// by Miller's recurrence.
pub fn power_series<R: Real>(p: &[R], gamma: R, n_terms: usize) -> Vec<R> {
    let mut q = Vec::with_capacity(n_terms);
    if n_terms == 0 {
        return q;
    }
    let p0 = p[0];
    q.push(p0.powf(gamma));
    let deg = p.len() - 1;
    let g1 = gamma + R::one();
    for n in 1..n_terms {
        let nr = R::from_usize(n);
        let mut s = R::zero();
        for j in 1..=n.min(deg) {
            let jr = R::from_usize(j);
            s += (g1 * jr - nr) * p[j] * q[n - j];
        }
        q.push(s / (nr * p0));
    }
    q
}

/// Convolution weights d_0..d_N of the BDF-k quadrature for an operator of
/// fractional order `gamma` (gamma = alpha for the derivative, alpha - 1 for
/// the integral).
pub fn cq_weights<R: Real>(k: usize, gamma: R, tau: R, n: usize) -> Result<CqWeightTable<R>> {
    check_order(k)?;
    if !(tau > R::zero()) {
        return Err(Error::NonPositiveTau(tau.to_f64()));
    }
    if !(gamma > -R::one() && gamma <= R::one()) {
        return Err(Error::InvalidArgument(format!("weight exponent {gamma} outside (-1, 1]")));
    }
    let p = bdf_symbol(k)?.coeffs_as::<R>();
    let scale = tau.powf(-gamma);
    let d = power_series(&p, gamma, n + 1).into_iter().map(|q| q * scale).collect();
    Ok(CqWeightTable { k, gamma, tau, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DoubleDouble;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn symbols_of_low_order() {
        assert_eq!(bdf_symbol(1).unwrap().coeffs, vec![r(1, 1), r(-1, 1)]);
        assert_eq!(bdf_symbol(2).unwrap().coeffs, vec![r(3, 2), r(-2, 1), r(1, 2)]);
        assert_eq!(bdf_symbol(3).unwrap().coeffs, vec![r(11, 6), r(-3, 1), r(3, 2), r(-1, 3)]);
    }

    #[test]
    fn symbol_vanishes_at_one() {
        for k in 1..=6 {
            let s = bdf_symbol(k).unwrap();
            let total: Ratio<i64> = s.coeffs.iter().sum();
            assert_eq!(total, r(0, 1));
            let harmonic: Ratio<i64> = (1..=k as i64).map(|i| r(1, i)).sum();
            assert_eq!(s.coeffs[0], harmonic);
        }
    }

    #[test]
    fn order_out_of_range() {
        assert_eq!(bdf_symbol(0), Err(Error::UnsupportedOrder(0)));
        assert!(matches!(cq_weights::<f64>(7, 0.5, 0.1, 4), Err(Error::UnsupportedOrder(7))));
        assert!(matches!(cq_weights::<f64>(2, 0.5, 0.0, 4), Err(Error::NonPositiveTau(_))));
    }

    #[test]
    fn square_root_of_backward_euler() {
        let w = cq_weights::<f64>(1, 0.5, 1.0, 3).unwrap();
        let expected = [1.0, -0.5, -0.125, -0.0625];
        for (a, b) in w.d.iter().zip(expected) {
            assert!((a - b).abs() < 1e-16);
        }
    }

    #[test]
    fn integer_power_reproduces_symbol() {
        let w = cq_weights::<f64>(2, 1.0, 1.0, 8).unwrap();
        assert_eq!(&w.d[..3], &[1.5, -2.0, 0.5]);
        assert!(w.d[3..].iter().all(|x| x.abs() < 1e-15));
        for k in 1..=6 {
            let w = cq_weights::<f64>(k, 1.0, 0.5, 20).unwrap();
            assert!(w.d[k + 1..].iter().all(|x| x.abs() < 1e-12), "k={k}");
        }
    }

    #[test]
    fn leading_weight_matches_harmonic_power() {
        for k in 1..=6 {
            let h: f64 = (1..=k).map(|i| 1.0 / i as f64).sum();
            let w = cq_weights::<f64>(k, 0.3, 0.01, 2).unwrap();
            let expected = h.powf(0.3) * 0.01f64.powf(-0.3);
            assert!((w.d[0] - expected).abs() < 1e-13 * expected);
            assert!(w.d[0] > 0.0);
        }
    }

    #[test]
    fn negative_index_is_zero() {
        let w = cq_weights::<f64>(3, -0.4, 0.1, 5).unwrap();
        assert_eq!(w.get(-1), 0.0);
        assert_eq!(w.get(2), w.d[2]);
    }

    #[test]
    fn extended_matches_standard() {
        let a = cq_weights::<f64>(6, 0.7, 1.0 / 64.0, 200).unwrap();
        let b = cq_weights::<DoubleDouble>(6, DoubleDouble::from_f64(0.7), DoubleDouble::from_f64(1.0 / 64.0), 200)
            .unwrap();
        for (x, y) in a.d.iter().zip(&b.d) {
            assert!((x - y.to_f64()).abs() <= 1e-12 * x.abs().max(1e-3));
        }
    }
}
