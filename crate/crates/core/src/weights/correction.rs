use num_rational::Ratio;

use super::bdf::{check_order, ratio_to};
use crate::error::Result;
use crate::numerics::Real;

/// Starting-correction coefficients for BDF-k: `a[j-1]` is a_j (j = 1..k-1)
/// for the initial value and f(0) terms, `b[l-1][j-1]` is b_{l,j}
/// (l = 1..k-2) for the Taylor terms of the source.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionCoeffs {
    pub k: usize,
    pub a: Vec<Ratio<i64>>,
    pub b: Vec<Vec<Ratio<i64>>>,
}

const A_TABLE: [&[(i64, i64)]; 5] = [
    &[(1, 2)],
    &[(11, 12), (-5, 12)],
    &[(31, 24), (-7, 6), (3, 8)],
    &[(1181, 720), (-177, 80), (341, 240), (-251, 720)],
    &[(2837, 1440), (-2543, 720), (17, 5), (-1201, 720), (95, 288)],
];

const B_TABLE: [&[&[(i64, i64)]]; 4] = [
    &[&[(1, 12), (0, 1)]],
    &[&[(1, 6), (-1, 12), (0, 1)], &[(0, 1), (0, 1), (0, 1)]],
    &[
        &[(59, 240), (-29, 120), (19, 240), (0, 1)],
        &[(1, 240), (-1, 240), (0, 1), (0, 1)],
        &[(-1, 720), (0, 1), (0, 1), (0, 1)],
    ],
    &[
        &[(77, 240), (-7, 15), (73, 240), (-3, 40), (0, 1)],
        &[(1, 96), (-1, 60), (1, 160), (0, 1), (0, 1)],
        &[(-1, 360), (1, 720), (0, 1), (0, 1), (0, 1)],
        &[(0, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
    ],
];

fn to_ratios(row: &[(i64, i64)]) -> Vec<Ratio<i64>> {
    row.iter().map(|&(n, d)| Ratio::new(n, d)).collect()
}

pub fn correction_coeffs(k: usize) -> Result<CorrectionCoeffs> {
    check_order(k)?;
    let a = if k >= 2 { to_ratios(A_TABLE[k - 2]) } else { Vec::new() };
    let b = if k >= 3 { B_TABLE[k - 3].iter().map(|row| to_ratios(row)).collect() } else { Vec::new() };
    Ok(CorrectionCoeffs { k, a, b })
}

impl CorrectionCoeffs {
    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a_as<R: Real>(&self) -> Vec<R> {
        self.a.iter().map(ratio_to).collect()
    }

    pub fn b_as<R: Real>(&self) -> Vec<Vec<R>> {
        self.b.iter().map(|row| row.iter().map(ratio_to).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn tabulated_rows() {
        let c3 = correction_coeffs(3).unwrap();
        assert_eq!(c3.a, vec![r(11, 12), r(-5, 12)]);
        assert_eq!(c3.b, vec![vec![r(1, 12), r(0, 1)]]);

        let c4 = correction_coeffs(4).unwrap();
        assert_eq!(c4.a, vec![r(31, 24), r(-7, 6), r(3, 8)]);
        assert_eq!(c4.b[0], vec![r(1, 6), r(-1, 12), r(0, 1)]);
        assert_eq!(c4.b[1], vec![r(0, 1); 3]);

        assert_eq!(correction_coeffs(2).unwrap().a, vec![r(1, 2)]);
        assert_eq!(correction_coeffs(5).unwrap().b[2][0], r(-1, 720));
    }

    #[test]
    fn backward_euler_needs_no_correction() {
        let c = correction_coeffs(1).unwrap();
        assert!(c.a.is_empty() && c.b.is_empty());
    }

    #[test]
    fn table_shapes() {
        for k in 2..=6 {
            let c = correction_coeffs(k).unwrap();
            assert_eq!(c.a.len(), k - 1);
            assert_eq!(c.b.len(), k.saturating_sub(2));
            assert!(c.b.iter().all(|row| row.len() == k - 1));
        }
    }

    #[test]
    fn initial_corrections_sum_condition() {
        // mu_k(1) = 1 forces delta_k'(1) * (sum a_j - 1/2) ... the zeroth order
        // condition reduces to sum_j a_j = 1/2 for every k
        for k in 2..=6 {
            let s: Ratio<i64> = correction_coeffs(k).unwrap().a.iter().sum();
            assert_eq!(s, r(1, 2), "k={k}");
        }
    }
}
