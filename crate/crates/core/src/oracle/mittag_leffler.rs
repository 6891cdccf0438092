use std::sync::Arc;

use num_complex::Complex;

use super::gamma::ln_gamma;
use crate::error::{Error, Result};
use crate::fem::SpatialFn;
use crate::numerics::dd::DoubleDouble as DD;
use crate::numerics::{cexp, cscale, GaussRule, Real};
use crate::scheme::ProblemSpec;

// exp(-R^(1/alpha)) bounds the asymptotic remainder; exp(R^(1/alpha)) the
// largest Taylor term.
const CROSSOVER_EXPONENT: f64 = 33.0;
const MAX_TERMS: usize = 20_000;

/// Radius separating the Taylor and asymptotic branches for `alpha`.
pub fn crossover_radius(alpha: f64) -> f64 {
    CROSSOVER_EXPONENT.powf(alpha)
}

/// Power series `sum_m z^m / Gamma(alpha m + 1)` summed in double-double.
pub fn ml_taylor(alpha: f64, z: f64) -> f64 {
    if z == 0.0 {
        return 1.0;
    }
    let a = DD::from_f64(alpha);
    let lz = DD::from_f64(z.abs()).ln();
    let peak = z.abs().powf(1.0 / alpha) / alpha;
    let mut sum = DD::ONE;
    for m in 1..MAX_TERMS {
        let arg = a * DD::from_i64(m as i64) + DD::ONE;
        let (lg, _) = ln_gamma(arg).expect("positive argument");
        let mag = (lz * DD::from_i64(m as i64) - lg).exp();
        let term = if z < 0.0 && m % 2 == 1 { -mag } else { mag };
        sum += term;
        if (m as f64) > peak && mag.to_f64() < 1e-34 * sum.abs().to_f64().max(1e-300) {
            break;
        }
    }
    sum.to_f64()
}

/// Expansion `-sum_m z^{-m} / Gamma(1 - alpha m)` for `z < 0`, truncated where
/// the envelope `|z|^{-m} Gamma(alpha m)` is smallest.
pub fn ml_asymptotic(alpha: f64, z: f64) -> f64 {
    let a = DD::from_f64(alpha);
    let lz = DD::from_f64(z.abs()).ln();
    let mut best = f64::INFINITY;
    let mut stop = 1;
    let mut lead = 0.0;
    for m in 1..MAX_TERMS {
        let (lg, _) = ln_gamma(a * DD::from_i64(m as i64)).expect("positive argument");
        let env = (lg - lz * DD::from_i64(m as i64)).to_f64();
        if env > best {
            break;
        }
        if m == 1 {
            lead = env;
        }
        best = env;
        stop = m;
        if env < lead - 80.0 {
            break;
        }
    }
    let mut sum = DD::ZERO;
    for m in 1..=stop {
        // z^{-m} / Gamma(1 - alpha m) in log form; poles contribute nothing
        let Some((lg, sign)) = ln_gamma(DD::ONE - a * DD::from_i64(m as i64)) else {
            continue;
        };
        let mag = (-(lz * DD::from_i64(m as i64)) - lg).exp();
        let odd = z < 0.0 && m % 2 == 1;
        let term = if (sign < 0.0) != odd { -mag } else { mag };
        sum -= term;
    }
    sum.to_f64()
}

/// `E_alpha(z)` for real `z` and `alpha` in (0, 1].
pub fn mittag_leffler(alpha: f64, z: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if !z.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite argument {z}")));
    }
    if z < -crossover_radius(alpha) {
        Ok(ml_asymptotic(alpha, z))
    } else {
        Ok(ml_taylor(alpha, z))
    }
}

/// Truncated sine expansion `scale * sum_j c_j sin(j pi x / L)`.
#[derive(Clone, Debug)]
pub struct EigenExpansion<R: Real> {
    pub length: f64,
    pub coeffs: Vec<Complex<R>>,
}

impl<R: Real> SpatialFn<R> for EigenExpansion<R> {
    fn eval(&self, x: R) -> Complex<R> {
        let l = R::from_f64(self.length);
        let mut s = Complex::new(R::zero(), R::zero());
        for (j, c) in self.coeffs.iter().enumerate() {
            let arg = R::pi() * R::from_usize(j + 1) * x / l;
            s += cscale(*c, arg.sin_cos().0);
        }
        s
    }
}

fn is_constant<R: Real>(u: &dyn SpatialFn<R>, length: f64, breakpoints: &[f64]) -> Option<R> {
    let mut xs: Vec<f64> = (0..=1000).map(|i| length * i as f64 / 1000.0).collect();
    for &b in breakpoints {
        xs.extend([b - 1e-9, b + 1e-9]);
    }
    let c = u.eval(R::from_f64(0.5 * length)).re;
    let tol = R::from_f64(1e-14) * c.abs().max(R::one());
    xs.iter().all(|&x| (u.eval(R::from_f64(x)).re - c).abs() <= tol).then_some(c)
}

/// Sine coefficients `(g, phi_j)` with `phi_j = sqrt(2/L) sin(j pi x / L)`.
fn sine_coefficients<R: Real>(g: &dyn SpatialFn<R>, length: f64, breakpoints: &[f64], modes: usize) -> Result<Vec<Complex<R>>> {
    let rule = GaussRule::<R>::new(16)?;
    let mut cuts: Vec<f64> = vec![0.0, length];
    cuts.extend(breakpoints.iter().copied().filter(|&b| b > 0.0 && b < length));
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let panels = (4 * modes).max(64);
    let l = R::from_f64(length);
    let norm = (R::from_i64(2) / l).sqrt();
    let mut out = vec![Complex::new(R::zero(), R::zero()); modes];
    for w in cuts.windows(2) {
        let (a, b) = (R::from_f64(w[0]), R::from_f64(w[1]));
        let h = (b - a) / R::from_usize(panels);
        for pnl in 0..panels {
            let x0 = a + h * R::from_usize(pnl);
            for (xi, wq) in rule.points.iter().zip(&rule.weights) {
                let x = x0 + h * *xi;
                let gv = cscale(g.eval(x), h * *wq * norm);
                for (j, o) in out.iter_mut().enumerate() {
                    let s = (R::pi() * R::from_usize(j + 1) * x / l).sin_cos().0;
                    *o += cscale(gv, s);
                }
            }
        }
    }
    Ok(out)
}

/// Exact solution at time `t` of a constant-potential problem with zero
/// source: `exp(-rho c t) sum_j E_alpha(-lambda_j t^alpha) (G0, phi_j) phi_j`.
pub fn ml_reference<R: Real>(p: &ProblemSpec<R>, t: R, modes: usize) -> Result<EigenExpansion<R>> {
    p.validate()?;
    if modes == 0 {
        return Err(Error::InvalidArgument("at least one mode is required".into()));
    }
    if !p.source.is_zero() {
        return Err(Error::NonzeroSource);
    }
    let c = is_constant(p.u.as_ref(), p.length, &p.u.breakpoints()).ok_or(Error::NonConstantU)?;
    let coeffs = sine_coefficients(p.g0.as_ref(), p.length, &p.g0.breakpoints(), modes)?;
    let alpha = p.alpha.to_f64();
    let tf = t.to_f64();
    let scale = cexp(cscale(p.rho, -(c * t)));
    let norm = (R::from_i64(2) / R::from_f64(p.length)).sqrt();
    let mut out = Vec::with_capacity(modes);
    for (j, cj) in coeffs.iter().enumerate() {
        let lambda = (std::f64::consts::PI * (j + 1) as f64 / p.length).powi(2);
        let e = mittag_leffler(alpha, -lambda * tf.powf(alpha))?;
        out.push(cscale(*cj * scale, R::from_f64(e) * norm));
    }
    Ok(EigenExpansion { length: p.length, coeffs: out })
}

/// Convenience wrapper returning a shared spatial function.
pub fn ml_reference_fn<R: Real>(p: &ProblemSpec<R>, t: R, modes: usize) -> Result<Arc<dyn SpatialFn<R>>> {
    Ok(Arc::new(ml_reference(p, t, modes)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero() {
        for &a in &[0.3, 0.5, 0.9] {
            assert_eq!(mittag_leffler(a, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn alpha_one_is_exponential() {
        let a = 1.0 - 1e-12;
        for i in 0..=50 {
            let z = -5.0 * i as f64 / 50.0;
            let e = mittag_leffler(a, z).unwrap();
            assert!((e - z.exp()).abs() < 1e-6, "z={z}");
        }
    }

    #[test]
    fn branches_agree_in_overlap() {
        for &a in &[0.3, 0.4, 0.5, 0.6, 0.7, 0.8] {
            for i in 0..=24 {
                let s = 27.0 + 0.5 * i as f64;
                let z = -s.powf(a);
                let (t, s) = (ml_taylor(a, z), ml_asymptotic(a, z));
                assert!((t - s).abs() < 1e-11, "alpha={a} z={z} {t:e} {s:e}");
            }
        }
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        assert!(matches!(mittag_leffler(1.5, -1.0), Err(Error::AlphaOutOfRange(_))));
        assert!(matches!(mittag_leffler(0.0, -1.0), Err(Error::AlphaOutOfRange(_))));
    }
}
