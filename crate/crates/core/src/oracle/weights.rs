use num_complex::Complex;

use crate::error::Result;
use crate::numerics::{circle_points, cpow, dft_leading_coefficients};
use crate::weights::cq_weights;

/// Largest relative deviation of the BDF1 weights `d_i tau^gamma` from the
/// Grünwald coefficients `(-1)^i binom(gamma, i)`, `i <= n`.
pub fn grunwald_defect(gamma: f64, n: usize) -> Result<f64> {
    let tau = 0.01f64;
    let w = cq_weights(1, gamma, tau, n)?;
    let mut c = 1.0f64;
    let mut worst = 0.0f64;
    for i in 0..=n {
        if i > 0 {
            c *= (i as f64 - 1.0 - gamma) / i as f64;
        }
        if c == 0.0 {
            worst = worst.max((w.d[i] * tau.powf(gamma)).abs());
            continue;
        }
        worst = worst.max((w.d[i] * tau.powf(gamma) - c).abs() / c.abs());
    }
    Ok(worst)
}

/// Normwise relative deviation `max|d - c| / max|d|` of the recurrence
/// weights from Taylor coefficients of `delta_k(zeta)^gamma` recovered by a
/// DFT on a circle of radius `eps^(1/8N)`, with `8N` samples.
pub fn dft_weight_defect(k: usize, gamma: f64, n: usize) -> Result<f64> {
    let w = cq_weights(k, gamma, 1.0, n)?;
    let m = 8 * n.max(1);
    let r = f64::EPSILON.powf(1.0 / m as f64);
    let one = Complex::new(1.0, 0.0);
    let samples: Vec<Complex<f64>> = circle_points(m, r)
        .into_iter()
        .map(|z| {
            let mut d = Complex::new(0.0, 0.0);
            let mut p = one;
            for i in 1..=k {
                p *= one - z;
                d += p / i as f64;
            }
            cpow(d, gamma)
        })
        .collect();
    let c = dft_leading_coefficients(&samples, r, n + 1);
    let scale = w.d.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    let diff = w.d.iter().zip(&c).fold(0.0f64, |s, (x, y)| s.max((Complex::new(*x, 0.0) - y).norm()));
    Ok(diff / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_instances() {
        assert!(grunwald_defect(0.5, 32).unwrap() < 1e-14);
        assert!(dft_weight_defect(3, 0.4, 128).unwrap() < 1e-12);
    }
}
