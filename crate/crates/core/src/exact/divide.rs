//! Exact right division `P = Q · D` by solving the block-convolution
//! equations for the coefficients of `Q`.

use super::grid::PolyGrid;
use super::linsolve::solve;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::polymat::Matrix;
use crate::scalar::Rational;

fn coeff_matrix(g: &PolyGrid, k: usize) -> Matrix<Rational> {
    Matrix::from_fn(g.rows(), g.cols(), |i, j| g[(i, j)].coeff(k))
}

/// Solves for `Q` of degree at most `e`; `None` if no such `Q` exists.
fn divide_at_degree(p: &PolyGrid, d: &PolyGrid, e: usize) -> Option<PolyGrid> {
    let (m, n) = p.shape();
    let k = d.rows();
    let dd = d.degree();
    let top = e + dd;
    if !p.is_zero() && p.degree() > top {
        return None;
    }
    let d_t: Vec<Matrix<Rational>> = (0..=dd).map(|s| coeff_matrix(d, s).transpose()).collect();
    // Row block t, column block i holds D_{t-i}^T.
    let a = Matrix::from_fn(n * (top + 1), k * (e + 1), |row, col| {
        let (t, ri) = (row / n, row % n);
        let (i, ci) = (col / k, col % k);
        match t.checked_sub(i) {
            Some(s) if s <= dd => d_t[s][(ri, ci)].clone(),
            _ => num_traits::Zero::zero(),
        }
    });
    let b = Matrix::from_fn(n * (top + 1), m, |row, col| p[(col, row % n)].coeff(row / n));
    let x = solve(&a, &b)?;
    Some(PolyGrid::from_fn(m, k, |i, j| {
        Poly::new((0..=e).map(|s| x[(s * k + j, i)].clone()).collect())
    }))
}

/// Finds `Q` with `Q · D = P`, searching quotient degrees upward from
/// `deg P − deg D`. The search stops at `deg P + rows(D)·deg D`, which
/// covers quotients by unimodular or rank-deficient divisors, whose degree
/// can exceed `deg P`.
pub fn right_divide(p: &PolyGrid, d: &PolyGrid) -> Result<PolyGrid> {
    if p.cols() != d.cols() {
        return Err(Error::Shape(format!(
            "cannot right-divide {:?} by {:?}",
            p.shape(),
            d.shape()
        )));
    }
    let dp = p.degree();
    let dd = d.degree();
    let hi = dp + d.rows() * dd;
    // A solution at degree e is also one at every larger degree, so a
    // single solve at the bound decides divisibility.
    divide_at_degree(p, d, hi).ok_or(Error::NotDivisible)?;
    for e in dp.saturating_sub(dd)..hi {
        if let Some(q) = divide_at_degree(p, d, e) {
            return Ok(q);
        }
    }
    Ok(divide_at_degree(p, d, hi).expect("checked above"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[Vec<Vec<i64>>]) -> PolyGrid {
        PolyGrid::from_int_rows(rows)
    }

    #[test]
    fn by_identity() {
        let p = g(&[vec![vec![1, 2], vec![0, 0, 3]], vec![vec![4], vec![]]]);
        assert_eq!(right_divide(&p, &PolyGrid::identity(2)).unwrap(), p);
    }

    #[test]
    fn scalar_quotient() {
        let q = right_divide(&g(&[vec![vec![0, 0, 1]]]), &g(&[vec![vec![0, 1]]])).unwrap();
        assert_eq!(q, g(&[vec![vec![0, 1]]]));
        assert!(matches!(
            right_divide(&g(&[vec![vec![1, 0, 1]]]), &g(&[vec![vec![0, 1]]])),
            Err(Error::NotDivisible)
        ));
    }

    #[test]
    fn quotient_degree_exceeds_dividend() {
        // [1, 0] = [1, −λ] · [[1, λ], [0, 1]]
        let p = g(&[vec![vec![1], vec![]]]);
        let d = g(&[vec![vec![1], vec![0, 1]], vec![vec![], vec![1]]]);
        let q = right_divide(&p, &d).unwrap();
        assert_eq!(q.mul(&d).unwrap(), p);
        assert_eq!(q, g(&[vec![vec![1], vec![0, -1]]]));
    }
}
