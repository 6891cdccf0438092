use num_complex::Complex;

use super::scalar::{cscale, Real};

/// Radius `eps^(1/(2N))` balancing aliasing against roundoff amplification
/// when recovering N Taylor coefficients from N samples.
pub fn dft_radius<R: Real>(n: usize) -> R {
    R::epsilon().powf(R::one() / R::from_usize(2 * n.max(1)))
}

/// Points `r * exp(2*pi*i*m/N)`, m = 0..N-1.
pub fn circle_points<R: Real>(n: usize, radius: R) -> Vec<Complex<R>> {
    let two_pi = R::pi() + R::pi();
    (0..n)
        .map(|m| {
            let (s, c) = (two_pi * R::from_usize(m) / R::from_usize(n)).sin_cos();
            Complex::new(radius * c, radius * s)
        })
        .collect()
}

/// Approximate Taylor coefficients c_j, j = 0..N-1, of a function sampled at
/// [`circle_points`]. Direct O(N^2) summation.
pub fn dft_coefficients<R: Real>(samples: &[Complex<R>], radius: R) -> Vec<Complex<R>> {
    dft_leading_coefficients(samples, radius, samples.len())
}

/// The first `count` coefficients only, for oversampled oracles.
pub fn dft_leading_coefficients<R: Real>(samples: &[Complex<R>], radius: R, count: usize) -> Vec<Complex<R>> {
    let n = samples.len();
    if n == 0 {
        return Vec::new();
    }
    let roots = circle_points(n, R::one());
    let inv_n = R::one() / R::from_usize(n);
    let inv_r = R::one() / radius;
    let mut scale = inv_n;
    let mut out = Vec::with_capacity(count.min(n));
    for j in 0..count.min(n) {
        let mut acc = Complex::new(R::zero(), R::zero());
        for (m, s) in samples.iter().enumerate() {
            // exp(-2 pi i j m / N) is the conjugate of roots[(j m) mod N]
            let w = roots[(j * m) % n].conj();
            acc += *s * w;
        }
        out.push(cscale(acc, scale));
        scale *= inv_r;
    }
    out
}
