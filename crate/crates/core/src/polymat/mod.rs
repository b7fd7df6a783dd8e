//! Polynomial matrices stored coefficient-major:
//! `P(λ) = P_0 + P_1 λ + … + P_d λ^d`, each `P_i` an `m × n` dense matrix.
//!
//! Coefficient-major storage is what the pencil realizations consume: they
//! place whole coefficient blocks into a companion-like pencil.

mod dense;

pub use dense::Matrix;

use crate::error::{Error, Result};
use crate::scalar::{c64, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<T> {
    rows: usize,
    cols: usize,
    coeffs: Vec<Matrix<T>>,
}

/// Row partition of a compound matrix into its input blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    sizes: Vec<usize>,
}

impl BlockSpec {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Shape("block sizes must be positive".into()));
        }
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Row ranges of each block inside the compound matrix.
    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.sizes
            .iter()
            .map(|&s| {
                let r = start..start + s;
                start += s;
                r
            })
            .collect()
    }

    /// Splits a compound matrix back into its blocks.
    pub fn split<T: Scalar>(&self, p: &PolyMatrix<T>) -> Result<Vec<PolyMatrix<T>>> {
        if p.rows() != self.total() {
            return Err(Error::Shape(format!(
                "block spec covers {} rows, matrix has {}",
                self.total(),
                p.rows()
            )));
        }
        Ok(self.ranges().into_iter().map(|r| p.row_slice(r.start, r.end)).collect())
    }
}

impl<T: Scalar> PolyMatrix<T> {
    /// Builds from coefficient matrices `[P_0, …, P_d]`; the list must be
    /// non-empty and all entries must share the shape `rows × cols`.
    pub fn new(rows: usize, cols: usize, coeffs: Vec<Matrix<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Shape("a polynomial matrix needs at least one coefficient".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.shape() != (rows, cols)) {
            return Err(Error::Shape(format!(
                "coefficient of shape {:?} in a {rows}x{cols} polynomial matrix",
                bad.shape()
            )));
        }
        Ok(Self { rows, cols, coeffs })
    }

    pub fn from_coeffs(coeffs: Vec<Matrix<T>>) -> Result<Self> {
        let (rows, cols) = coeffs
            .first()
            .map(Matrix::shape)
            .ok_or_else(|| Error::Shape("empty coefficient list".into()))?;
        Self::new(rows, cols, coeffs)
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            coeffs: vec![Matrix::zeros(rows, cols)],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(Matrix::identity(n))
    }

    pub fn constant(m: Matrix<T>) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            coeffs: vec![m],
        }
    }

    /// Builds a matrix entry by entry; `f(i, j)` returns the ascending
    /// coefficient list of entry `(i, j)`.
    pub fn from_entries(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Vec<T>) -> Self {
        let entries: Vec<Vec<Vec<T>>> = (0..rows).map(|i| (0..cols).map(|j| f(i, j)).collect()).collect();
        let len = entries.iter().flatten().map(Vec::len).max().unwrap_or(0).max(1);
        let coeffs = (0..len)
            .map(|k| {
                Matrix::from_fn(rows, cols, |i, j| {
                    entries[i][j].get(k).cloned().unwrap_or_else(T::zero)
                })
            })
            .collect();
        Self { rows, cols, coeffs }.trimmed_exact()
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

    /// Stored degree `d` (number of coefficients minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Matrix<T>] {
        &self.coeffs
    }

    /// Coefficient of `λ^i`; zero beyond the stored degree.
    pub fn coeff(&self, i: usize) -> Matrix<T> {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.rows, self.cols))
    }

    /// Ascending coefficients of entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Vec<T> {
        self.coeffs.iter().map(|c| c[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_zero)
    }

    /// Horner evaluation `Σ P_i x^i`.
    pub fn eval(&self, x: &T) -> Matrix<T> {
        let mut acc = self.coeffs[self.degree()].clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.scale(x).add(c).expect("coefficients share a shape");
        }
        acc
    }

    /// Coefficient-convolution product, trimmed of exactly-zero top terms.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let deg = self.degree() + other.degree();
        let mut coeffs = vec![Matrix::zeros(self.rows, other.cols); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.matmul(b)?)?;
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            coeffs,
        }
        .trimmed_exact())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.sub(b))
    }

    fn combine(
        &self,
        other: &Self,
        f: impl Fn(&Matrix<T>, &Matrix<T>) -> Result<Matrix<T>>,
    ) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!("{:?} vs {:?}", self.shape(), other.shape())));
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| f(&self.coeff(k), &other.coeff(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
        .trimmed_exact())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PolyMatrix<U> {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|c| c.map(&f)).collect(),
        }
    }

    pub fn to_c64(&self) -> PolyMatrix<c64> {
        self.map(Scalar::to_c64)
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            coeffs: self.coeffs.iter().map(Matrix::transpose).collect(),
        }
    }

    /// Frobenius norm of the stacked coefficient matrices.
    pub fn frob_norm(&self) -> f64 {
        self.coeffs.iter().map(Matrix::frob_norm_sq).sum::<f64>().sqrt()
    }

    pub fn row_slice(&self, start: usize, end: usize) -> Self {
        Self {
            rows: end - start,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|c| c.row_slice(start, end)).collect(),
        }
    }

    pub fn col_slice(&self, start: usize, end: usize) -> Self {
        Self {
            rows: self.rows,
            cols: end - start,
            coeffs: self.coeffs.iter().map(|c| c.col_slice(start, end)).collect(),
        }
    }

    /// Pads with zero coefficients up to `degree`; never drops terms.
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut out = self.clone();
        while out.coeffs.len() <= degree {
            out.coeffs.push(Matrix::zeros(self.rows, self.cols));
        }
        out
    }

    pub fn hstack(parts: &[&Self]) -> Result<Self> {
        let deg = parts.iter().map(|p| p.degree()).max().unwrap_or(0);
        let coeffs = (0..=deg)
            .map(|k| {
                let cs: Vec<Matrix<T>> = parts.iter().map(|p| p.coeff(k)).collect();
                Matrix::hstack(&cs.iter().collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = parts.first().map_or(0, |p| p.rows);
        Self::new(rows, parts.iter().map(|p| p.cols).sum(), coeffs)
    }

    /// Drops exactly-zero top coefficients (keeps at least `P_0`).
    pub fn trimmed_exact(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Matrix::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    /// Drops top coefficients whose norm is at most `tol · ‖P‖`.
    /// `tol = 0` drops only exactly-zero coefficients.
    pub fn trim(&self, tol: f64) -> Self {
        if tol <= 0.0 {
            return self.clone().trimmed_exact();
        }
        let threshold = tol * self.frob_norm();
        let mut out = self.clone().trimmed_exact();
        while out.coeffs.len() > 1 && out.coeffs.last().is_some_and(|c| c.frob_norm() <= threshold) {
            out.coeffs.pop();
        }
        out
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero(self.rows, self.cols);
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&T::from_i64(i as i64 + 1)))
                .collect(),
        }
    }
}

impl PolyMatrix<c64> {
    /// Scales to unit Frobenius norm; the zero matrix is returned unchanged.
    pub fn normalize(&self) -> Self {
        let nrm = self.frob_norm();
        if nrm == 0.0 {
            return self.clone();
        }
        self.scale(&c64::new(1.0 / nrm, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_finite)
    }
}

/// Stacks blocks with a common column count into the compound matrix and
/// returns the row partition.
pub fn vstack<T: Scalar>(blocks: &[PolyMatrix<T>]) -> Result<(PolyMatrix<T>, BlockSpec)> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::Shape("at least one block is required".into()))?;
    let n = first.cols();
    if let Some(b) = blocks.iter().find(|b| b.cols() != n) {
        return Err(Error::Shape(format!(
            "block with {} columns, expected {n}",
            b.cols()
        )));
    }
    let spec = BlockSpec::new(blocks.iter().map(PolyMatrix::rows).collect())?;
    let deg = blocks.iter().map(PolyMatrix::degree).max().unwrap_or(0);
    let coeffs = (0..=deg)
        .map(|k| {
            let cs: Vec<Matrix<T>> = blocks.iter().map(|b| b.coeff(k)).collect();
            Matrix::vstack(&cs.iter().collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((PolyMatrix::new(spec.total(), n, coeffs)?, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    fn q(v: i64) -> Rational {
        rational(v, 1)
    }

    fn qm(rows: Vec<Vec<i64>>) -> Matrix<Rational> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect()).unwrap()
    }

    #[test]
    fn vstack_two_rows() {
        let a = PolyMatrix::from_entries(1, 2, |_, j| if j == 0 { vec![q(0), q(1)] } else { vec![q(1)] });
        let b = PolyMatrix::from_entries(1, 2, |_, j| if j == 0 { vec![] } else { vec![q(0), q(1)] });
        let (p, spec) = vstack(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(p.coeff(0), qm(vec![vec![0, 1], vec![0, 0]]));
        assert_eq!(p.coeff(1), qm(vec![vec![1, 0], vec![0, 1]]));
        assert_eq!(spec.sizes(), &[1, 1]);
        assert_eq!(spec.split(&p).unwrap(), vec![a, b]);
    }

    #[test]
    fn vstack_single_and_mismatch() {
        let a = PolyMatrix::<Rational>::identity(3);
        let (p, spec) = vstack(std::slice::from_ref(&a)).unwrap();
        assert_eq!(p, a);
        assert_eq!(spec.sizes(), &[3]);
        let b = PolyMatrix::<Rational>::identity(2);
        assert!(matches!(vstack(&[a, b]), Err(Error::Shape(_))));
        assert!(vstack::<Rational>(&[]).is_err());
    }

    #[test]
    fn eval_constant_term_and_identity() {
        let p = PolyMatrix::from_entries(2, 2, |i, j| vec![q((i + j) as i64), q(1), q(2)]);
        assert_eq!(p.eval(&q(0)), p.coeff(0));
        let id = PolyMatrix::<Rational>::identity(3);
        assert_eq!(id.eval(&rational(7, 3)), Matrix::identity(3));
    }

    #[test]
    fn scalar_product_identity() {
        let a = PolyMatrix::from_entries(1, 1, |_, _| vec![q(1), q(1)]);
        let b = PolyMatrix::from_entries(1, 1, |_, _| vec![q(1), q(-1)]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c.entry(0, 0), vec![q(1), q(0), q(-1)]);
        let id = PolyMatrix::<Rational>::identity(1);
        assert_eq!(id.mul(&b).unwrap(), b);
    }

    #[test]
    fn norms_and_normalize() {
        let z = PolyMatrix::<c64>::zero(2, 3);
        assert_eq!(z.frob_norm(), 0.0);
        assert_eq!(z.normalize(), z);
        let id = PolyMatrix::<c64>::identity(2);
        assert!((id.frob_norm() - 2f64.sqrt()).abs() < 1e-15);
        assert!((id.normalize().frob_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trimming() {
        let p = PolyMatrix::new(1, 1, vec![qm(vec![vec![1]]), qm(vec![vec![2]]), qm(vec![vec![0]])]).unwrap();
        assert_eq!(p.trim(0.0).degree(), 1);
        let small = |x: f64| Matrix::from_fn(1, 1, |_, _| c64::new(x, 0.0));
        let f = PolyMatrix::new(1, 1, vec![small(1.0), small(0.0), small(1e-3), small(1e-18)]).unwrap();
        assert_eq!(f.trim(1e-13).degree(), 2);
    }
}
