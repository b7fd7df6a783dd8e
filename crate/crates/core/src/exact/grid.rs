//! Entry-major polynomial matrices over ℚ, used by the normal-form
//! algorithms, which operate on whole rows and columns of polynomials.

use std::ops::{Index, IndexMut};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::polymat::{Matrix, PolyMatrix};
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyGrid {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyGrid {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut g = Self::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = Poly::one();
        }
        g
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Rows of integer coefficient lists, e.g. `[[[0, 1], [1]]]` for `[λ, 1]`.
    pub fn from_int_rows(rows: &[Vec<Vec<i64>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| Poly::from_ints(&rows[i][j]))
    }

    pub fn from_poly_matrix(p: &PolyMatrix<Rational>) -> Self {
        Self::from_fn(p.rows(), p.cols(), |i, j| Poly::new(p.entry(i, j)))
    }

    pub fn to_poly_matrix(&self) -> PolyMatrix<Rational> {
        let len = self.data.iter().map(|p| p.coeffs().len()).max().unwrap_or(0).max(1);
        let coeffs = (0..len)
            .map(|k| Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].coeff(k)))
            .collect();
        PolyMatrix::new(self.rows, self.cols, coeffs).expect("shapes agree by construction")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (0..self.cols).all(|j| self[(i, j)].is_zero())
    }

    /// Largest entry degree; 0 for the zero matrix.
    pub fn degree(&self) -> usize {
        self.data.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                o.shape()
            )));
        }
        Ok(Self::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(Poly::zero(), |acc, k| acc.add(&self[(i, k)].mul(&o[(k, j)])))
        }))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        if self.shape() != o.shape() {
            return Err(Error::Shape(format!("{:?} vs {:?}", self.shape(), o.shape())));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].sub(&o[(i, j)])))
    }

    pub fn row_slice(&self, start: usize, end: usize) -> Self {
        Self::from_fn(end - start, self.cols, |i, j| self[(start + i, j)].clone())
    }

    pub fn col_slice(&self, start: usize, end: usize) -> Self {
        Self::from_fn(self.rows, end - start, |i, j| self[(i, start + j)].clone())
    }

    pub fn vstack(&self, o: &Self) -> Result<Self> {
        if self.cols != o.cols {
            return Err(Error::Shape("vstack with unequal column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Ok(Self {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn eval(&self, x: &Rational) -> Matrix<Rational> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].eval(x))
    }

    // Elementary operations. `add_row(i, j, c)` is `row_i += c·row_j`.

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.cols {
                self.data.swap(i * self.cols + k, j * self.cols + k);
            }
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.rows {
                self.data.swap(k * self.cols + i, k * self.cols + j);
            }
        }
    }

    pub fn add_row(&mut self, i: usize, j: usize, c: &Poly) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.cols {
            let t = c.mul(&self[(j, k)]);
            if !t.is_zero() {
                self[(i, k)] = self[(i, k)].add(&t);
            }
        }
    }

    pub fn add_col(&mut self, i: usize, j: usize, c: &Poly) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.rows {
            let t = self[(k, j)].mul(c);
            if !t.is_zero() {
                self[(k, i)] = self[(k, i)].add(&t);
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, s: &Rational) {
        for k in 0..self.cols {
            self[(i, k)] = self[(i, k)].scale(s);
        }
    }

    pub fn scale_col(&mut self, i: usize, s: &Rational) {
        for k in 0..self.rows {
            self[(k, i)] = self[(k, i)].scale(s);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination over ℚ[λ].
    pub fn det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!(
                "determinant of a non-square {:?} matrix",
                self.shape()
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one());
        }
        let mut a = self.clone();
        let mut prev = Poly::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        negate = !negate;
                    }
                    None => return Ok(Poly::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[(i, j)].mul(&a[(k, k)]).sub(&a[(i, k)].mul(&a[(k, j)]));
                    a[(i, j)] = num
                        .exact_div(&prev)
                        .expect("Bareiss division is exact");
                }
                a[(i, k)] = Poly::zero();
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        Ok(if negate { d.neg() } else { d })
    }

    /// Normal rank: rank over the field of fractions ℚ(λ).
    pub fn normal_rank(&self) -> usize {
        super::hermite::hermite_form(self).rank
    }
}

impl Index<(usize, usize)> for PolyGrid {
    type Output = Poly;

    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for PolyGrid {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        &mut self.data[i * self.cols + j]
    }
}

/// True iff `P` is square with a nonzero constant determinant.
pub fn is_unimodular(p: &PolyGrid) -> Result<bool> {
    let d = p.det()?;
    Ok(!d.is_zero() && d.is_constant())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[Vec<Vec<i64>>]) -> PolyGrid {
        PolyGrid::from_int_rows(rows)
    }

    #[test]
    fn unimodularity_examples() {
        assert!(is_unimodular(&PolyGrid::identity(3)).unwrap());
        let shear = g(&[vec![vec![1], vec![0, 1]], vec![vec![], vec![1]]]);
        assert!(is_unimodular(&shear).unwrap());
        let jordan = g(&[vec![vec![0, 1], vec![1]], vec![vec![], vec![0, 1]]]);
        assert!(!is_unimodular(&jordan).unwrap());
        assert_eq!(jordan.det().unwrap(), Poly::from_ints(&[0, 0, 1]));
        assert!(is_unimodular(&PolyGrid::zeros(2, 3)).is_err());
    }

    #[test]
    fn det_with_row_swap() {
        // [[0, 1], [λ, 2]] has det -λ.
        let m = g(&[vec![vec![], vec![1]], vec![vec![0, 1], vec![2]]]);
        assert_eq!(m.det().unwrap(), Poly::from_ints(&[0, -1]));
    }

    #[test]
    fn poly_matrix_round_trip() {
        let m = g(&[vec![vec![1, 2, 3], vec![]], vec![vec![0, 1], vec![5]]]);
        assert_eq!(PolyGrid::from_poly_matrix(&m.to_poly_matrix()), m);
    }
}
