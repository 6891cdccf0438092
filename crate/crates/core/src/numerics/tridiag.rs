use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};

use super::scalar::{cabs, Real};

const PIVOT_FLOOR: f64 = 1e-300;

/// Complex tridiagonal matrix. `sub[i]` couples row i+1 to column i and
/// `sup[i]` couples row i to column i+1, so both have length n-1.
#[derive(Clone, Debug)]
pub struct TriDiagonal<R: Real> {
    pub sub: Vec<Complex<R>>,
    pub diag: Vec<Complex<R>>,
    pub sup: Vec<Complex<R>>,
}

/// LU factors from Thomas elimination without pivoting.
#[derive(Clone, Debug)]
pub struct TriFactor<R: Real> {
    sup: Vec<Complex<R>>,
    /// Reciprocal pivots.
    inv_piv: Vec<Complex<R>>,
    /// Multipliers l_i = sub[i-1] / pivot[i-1].
    mult: Vec<Complex<R>>,
}

impl<R: Real> TriDiagonal<R> {
    pub fn new(sub: Vec<Complex<R>>, diag: Vec<Complex<R>>, sup: Vec<Complex<R>>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal bands have inconsistent lengths ({}, {}, {})",
                sub.len(),
                n,
                sup.len()
            )));
        }
        Ok(Self { sub, diag, sup })
    }

    /// Symmetric matrix from a diagonal and one off-diagonal band.
    pub fn symmetric(diag: Vec<Complex<R>>, off: Vec<Complex<R>>) -> Result<Self> {
        Self::new(off.clone(), diag, off)
    }

    pub fn identity(n: usize) -> Self {
        let one = Complex::new(R::one(), R::zero());
        let z = Complex::zero();
        Self {
            sub: vec![z; n.saturating_sub(1)],
            diag: vec![one; n],
            sup: vec![z; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn matvec(&self, x: &[Complex<R>]) -> Vec<Complex<R>> {
        let n = self.len();
        assert_eq!(x.len(), n);
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.sup[i] * x[i + 1];
            }
            y.push(v);
        }
        y
    }

    pub fn factor(&self) -> Result<TriFactor<R>> {
        let n = self.len();
        let mut inv_piv = Vec::with_capacity(n);
        let mut mult = Vec::with_capacity(n);
        let mut piv = self.diag[0];
        mult.push(Complex::zero());
        for i in 0..n {
            if i > 0 {
                let l = self.sub[i - 1] * inv_piv[i - 1];
                piv = self.diag[i] - l * self.sup[i - 1];
                mult.push(l);
            }
            if !(cabs(piv).to_f64() > PIVOT_FLOOR) {
                return Err(Error::PivotBreakdown { row: i });
            }
            inv_piv.push(Complex::new(R::one(), R::zero()) / piv);
        }
        Ok(TriFactor { sup: self.sup.clone(), inv_piv, mult })
    }
}

impl<R: Real> TriFactor<R> {
    pub fn len(&self) -> usize {
        self.inv_piv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_piv.is_empty()
    }

    pub fn solve(&self, rhs: &[Complex<R>]) -> Vec<Complex<R>> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, x: &mut [Complex<R>]) {
        let n = self.len();
        assert_eq!(x.len(), n);
        for i in 1..n {
            let prev = x[i - 1];
            x[i] -= self.mult[i] * prev;
        }
        x[n - 1] *= self.inv_piv[n - 1];
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] = (x[i] - self.sup[i] * next) * self.inv_piv[i];
        }
    }
}

/// Factor and solve in one call.
pub fn tridiag_solve<R: Real>(sys: &TriDiagonal<R>, rhs: &[Complex<R>]) -> Result<Vec<Complex<R>>> {
    if rhs.len() != sys.len() {
        return Err(Error::InvalidArgument(format!(
            "rhs length {} does not match system size {}",
            rhs.len(),
            sys.len()
        )));
    }
    Ok(sys.factor()?.solve(rhs))
}
