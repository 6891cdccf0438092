use num_complex::Complex;

use fracfk::numerics::{circle_points, cpow, dft_leading_coefficients};
use fracfk::weights::{bdf_symbol, cq_weights};

/// Lanczos approximation (g = 7, 9 terms), independent of the library.
fn gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = G[0];
    let t = x + 7.5;
    for (i, g) in G.iter().enumerate().skip(1) {
        a += g / (x + i as f64);
    }
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

#[test]
fn gamma_helper_sanity() {
    assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    assert!((gamma(5.0) - 24.0).abs() < 1e-12);
}

#[test]
fn grunwald_identity_for_backward_euler() {
    for &g in &[0.3, 0.5, 0.7, -0.3, -0.5, -0.7, 1.0] {
        let tau: f64 = 0.01;
        let w = cq_weights(1, g, tau, 64).unwrap();
        let mut c = 1.0f64;
        for i in 0..=64usize {
            if i > 0 {
                c *= (i as f64 - 1.0 - g) / i as f64;
            }
            let got = w.d[i] * tau.powf(g);
            assert!((got - c).abs() <= 1e-14 * c.abs().max(1e-300) + 1e-300, "gamma={g} i={i}: {got} vs {c}");
        }
    }
}

#[test]
fn spec_examples() {
    let s = bdf_symbol(3).unwrap();
    let f: Vec<f64> = s.coeffs_as();
    let expect = [11.0 / 6.0, -3.0, 1.5, -1.0 / 3.0];
    for (a, b) in f.iter().zip(expect) {
        assert!((a - b).abs() < 1e-15);
    }
}

fn delta_power_samples(k: usize, gamma: f64, pts: &[Complex<f64>]) -> Vec<Complex<f64>> {
    pts.iter()
        .map(|z| {
            // direct sum of (1 - z)^i / i, independent of the stored coefficients
            let mut d = Complex::new(0.0, 0.0);
            let mut p = Complex::new(1.0, 0.0);
            for i in 1..=k {
                p *= Complex::new(1.0, 0.0) - z;
                d += p / i as f64;
            }
            cpow(d, gamma)
        })
        .collect()
}

fn normwise_rel(a: &[f64], b: &[Complex<f64>]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((Complex::new(*x, 0.0) - y).norm()));
    diff / scale
}

#[test]
fn miller_recurrence_matches_dft_oracle() {
    let n = 1024;
    let m = 8 * n;
    // r^m = eps keeps aliasing at roundoff level
    let r = f64::EPSILON.powf(1.0 / m as f64);
    let pts = circle_points(m, r);
    for k in 1..=6 {
        for &alpha in &[0.3, 0.5, 0.7] {
            for g in [alpha, alpha - 1.0] {
                let w = cq_weights(k, g, 1.0, n).unwrap();
                let c = dft_leading_coefficients(&delta_power_samples(k, g, &pts), r, n + 1);
                let e = normwise_rel(&w.d, &c);
                assert!(e <= 1e-12, "k={k} gamma={g}: {e:e}");
            }
        }
    }
}

#[test]
fn dft_example_at_fixed_radius() {
    // radius 0.9 amplifies roundoff by 0.9^-j, so only the leading block is compared
    let pts = circle_points(256, 0.9);
    let c = dft_leading_coefficients(&delta_power_samples(2, 0.5, &pts), 0.9, 48);
    let w = cq_weights(2, 0.5, 1.0, 47).unwrap();
    for (j, (a, b)) in w.d.iter().zip(&c).enumerate() {
        assert!((Complex::new(*a, 0.0) - b).norm() <= 1e-10 * a.abs(), "j={j}");
    }
}

#[test]
fn four_point_three_example() {
    let n = 512;
    let m = 8 * n;
    let r = f64::EPSILON.powf(1.0 / m as f64);
    let pts = circle_points(m, r);
    let w = cq_weights(4, 0.3, 0.01, n).unwrap();
    let scale = 0.01f64.powf(-0.3);
    let c: Vec<_> = dft_leading_coefficients(&delta_power_samples(4, 0.3, &pts), r, n + 1)
        .into_iter()
        .map(|z| z * scale)
        .collect();
    assert!(normwise_rel(&w.d, &c) <= 1e-12);
}

#[test]
fn partial_sums_decrease_in_magnitude() {
    for k in 1..=6 {
        for &alpha in &[0.3, 0.5, 0.7] {
            let tau: f64 = 1.0 / 64.0;
            let w = cq_weights(k, alpha, tau, 2000).unwrap();
            let mut s = 0.0;
            let mut prev = f64::INFINITY;
            for (i, d) in w.d.iter().enumerate() {
                s += d * tau.powf(alpha);
                if i >= 4 * k {
                    assert!(s.abs() < prev, "k={k} alpha={alpha} N={i}");
                    prev = s.abs();
                }
            }
        }
    }
}

#[test]
fn weight_sums_approach_derivative_of_constant() {
    for k in 1..=6 {
        for &alpha in &[0.3, 0.5, 0.7] {
            let target = 1.0 / gamma(1.0 - alpha);
            let mut last = f64::INFINITY;
            for p in 5..=9 {
                let n = 1usize << p;
                let w = cq_weights(k, alpha, 1.0 / n as f64, n).unwrap();
                let e = (w.d.iter().sum::<f64>() - target).abs();
                assert!(e < last, "k={k} alpha={alpha} 1/tau={n}: {e:e}");
                last = e;
            }
            assert!(last < 1e-2, "k={k} alpha={alpha}: {last:e}");
        }
    }
}
