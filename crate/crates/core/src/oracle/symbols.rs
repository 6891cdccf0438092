use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{cabs, cexp, cplx, cscale, Real};
use crate::weights::{bdf_symbol, correction_coeffs, MAX_ORDER};

/// Numerator `P_l` of `gamma_l(z) = (z d/dz)^l (1 - z)^{-1} = P_l(z) / (1 - z)^{l+1}`,
/// lowest degree first.
pub fn gamma_numerator(l: usize) -> Vec<i64> {
    let mut p = vec![1i64];
    for m in 0..l {
        // P' (1 - z) z + (m + 1) z P
        let mut next = vec![0i64; p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            if i > 0 {
                let d = c * i as i64;
                next[i] += d;
                next[i + 1] -= d;
            }
            next[i + 1] += (m as i64 + 1) * c;
        }
        p = next;
    }
    p
}

fn poly_eval<R: Real>(coeffs: &[i64], z: Complex<R>) -> Complex<R> {
    coeffs
        .iter()
        .rev()
        .fold(Complex::new(R::zero(), R::zero()), |acc, &c| acc * z + Complex::new(R::from_i64(c), R::zero()))
}

/// `gamma_l(z) = sum_{m >= 1} m^l z^m` for `l >= 1`.
pub fn gamma_l<R: Real>(l: usize, z: Complex<R>) -> Complex<R> {
    let one_minus = Complex::new(R::one(), R::zero()) - z;
    poly_eval(&gamma_numerator(l), z) / one_minus.powu(l as u32 + 1)
}

/// `mu_k(z) = delta_k(z) (z / (1 - z) + sum_j a_j z^j)`, expanded so that no
/// pole at `z = 1` is evaluated.
pub fn mu<R: Real>(k: usize, z: Complex<R>) -> Result<Complex<R>> {
    let sym = bdf_symbol(k)?;
    let coeffs = correction_coeffs(k)?;
    let one = Complex::new(R::one(), R::zero());
    let w = one - z;
    let mut head = Complex::new(R::zero(), R::zero());
    let mut wp = one;
    for i in 1..=k {
        head += cscale(wp, R::one() / R::from_usize(i));
        wp *= w;
    }
    let mut corr = Complex::new(R::zero(), R::zero());
    let mut zp = one;
    for a in coeffs.a_as::<R>() {
        zp *= z;
        corr += cscale(zp, a);
    }
    Ok(z * head + sym.eval(z) * corr)
}

/// Scaled `eta_{k,l}(z) = gamma_l(z) / l! + sum_j b_{l,j} z^j`; at `z = e^{-w}`
/// it approximates `w^{-l-1}`.
pub fn eta<R: Real>(k: usize, l: usize, z: Complex<R>) -> Result<Complex<R>> {
    if k == 0 || k > MAX_ORDER {
        return Err(Error::UnsupportedOrder(k));
    }
    if l == 0 || l + 2 > k {
        return Err(Error::IndexOutOfRange { k, l });
    }
    let coeffs = correction_coeffs(k)?;
    let fact: i64 = (1..=l as i64).product();
    let mut s = gamma_l(l, z) / Complex::new(R::from_i64(fact), R::zero());
    let mut zp = Complex::new(R::one(), R::zero());
    for b in &coeffs.b_as::<R>()[l - 1] {
        zp *= z;
        s += cscale(zp, *b);
    }
    Ok(s)
}

/// Defect magnitudes over a grid of `w = z tau` with the fitted log-log slope.
#[derive(Clone, Debug)]
pub struct SymbolDefect {
    pub k: usize,
    pub l: Option<usize>,
    pub grid: Vec<f64>,
    pub defects: Vec<f64>,
    pub order: f64,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `count` points `w = r e^{i angle}` with `r` log-spaced on `[lo, hi]`.
pub fn sector_grid<R: Real>(lo: f64, hi: f64, count: usize, angle: f64) -> Vec<Complex<R>> {
    let (c, s) = (angle.cos(), angle.sin());
    (0..count)
        .map(|i| {
            let f = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.0 };
            let r = lo * (hi / lo).powf(f);
            cplx(R::from_f64(r * c), R::from_f64(r * s))
        })
        .collect()
}

fn finish(k: usize, l: Option<usize>, grid: Vec<f64>, defects: Vec<f64>) -> Result<SymbolDefect> {
    if grid.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let order = fit_slope(&grid, &defects);
    Ok(SymbolDefect { k, l, grid, defects, order })
}

/// `|mu_k(e^{-w}) - 1|` on the grid; the slope approximates `k`.
pub fn symbol_defect_mu<R: Real>(k: usize, grid: &[Complex<R>]) -> Result<SymbolDefect> {
    let one = Complex::new(R::one(), R::zero());
    let mut rs = Vec::with_capacity(grid.len());
    let mut ds = Vec::with_capacity(grid.len());
    for &w in grid {
        let z = cexp(-w);
        rs.push(cabs(w).to_f64());
        ds.push(cabs(mu(k, z)? - one).to_f64());
    }
    finish(k, None, rs, ds)
}

/// `|eta_{k,l}(e^{-w}) - w^{-l-1}|` on the grid. At step `tau` the defect of
/// the unscaled symbol is `tau^{l+1}` times this, so the slope approximates
/// `k - l - 1`.
pub fn symbol_defect_eta<R: Real>(k: usize, l: usize, grid: &[Complex<R>]) -> Result<SymbolDefect> {
    let one = Complex::new(R::one(), R::zero());
    let mut rs = Vec::with_capacity(grid.len());
    let mut ds = Vec::with_capacity(grid.len());
    for &w in grid {
        let z = cexp(-w);
        let target = one / w.powu(l as u32 + 1);
        rs.push(cabs(w).to_f64());
        ds.push(cabs(eta(k, l, z)? - target).to_f64());
    }
    finish(k, Some(l), rs, ds)
}
