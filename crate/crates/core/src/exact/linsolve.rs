//! Exact Gaussian elimination over ℚ.

use num_traits::Zero;

use crate::polymat::Matrix;
use crate::scalar::Rational;

/// Solves `A X = B` exactly; returns one solution (free variables set to
/// zero) or `None` when the system is inconsistent.
pub fn solve(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Option<Matrix<Rational>> {
    assert_eq!(a.rows(), b.rows(), "right-hand side height mismatch");
    let (rows, cols, nrhs) = (a.rows(), a.cols(), b.cols());
    let mut aug: Vec<Vec<Rational>> = (0..rows)
        .map(|i| a.row(i).iter().chain(b.row(i)).cloned().collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for v in aug[r][c..].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = aug[r].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if aug[r..].iter().any(|row| row[cols..].iter().any(|v| !v.is_zero())) {
        return None;
    }
    let mut x = Matrix::zeros(cols, nrhs);
    for (i, &c) in pivots.iter().enumerate() {
        for k in 0..nrhs {
            x[(c, k)] = aug[i][cols + k].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rational(v, 1)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn square_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = m(&[&[3], &[5]]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.matmul(&x).unwrap(), b);
        assert_eq!(x[(0, 0)], rational(4, 5));
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&a, &m(&[&[1], &[3]])).is_none());
        let x = solve(&a, &m(&[&[1], &[2]])).unwrap();
        assert_eq!(a.matmul(&x).unwrap(), m(&[&[1], &[2]]));
    }
}
