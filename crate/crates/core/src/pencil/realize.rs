//! Pencil realizations of a polynomial matrix.

use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::error::{Error, Result};
use crate::polymat::{Matrix, PolyMatrix};
use crate::scalar::c64;

/// The pencil `A − λE`.
#[derive(Clone, Debug)]
pub struct Pencil {
    pub a: Mat<c64>,
    pub e: Mat<c64>,
}

impl Pencil {
    pub fn new(a: Mat<c64>, e: Mat<c64>) -> Result<Self> {
        if a.shape() != e.shape() {
            return Err(Error::Shape(format!(
                "pencil coefficients {:?} and {:?} differ in shape",
                a.shape(),
                e.shape()
            )));
        }
        let finite = |m: &Mat<c64>| {
            (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].re.is_finite() && m[(i, j)].im.is_finite()))
        };
        if !finite(&a) || !finite(&e) {
            return Err(Error::Numerical("pencil has non-finite entries".into()));
        }
        Ok(Self { a, e })
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn eval(&self, x: c64) -> Mat<c64> {
        &self.a - &self.e * faer::Scale(x)
    }

    /// `max(‖A‖₂, ‖E‖₂)`, estimated.
    pub fn scale(&self) -> f64 {
        super::linalg::spectral_norm_estimate(self.a.as_ref())
            .max(super::linalg::spectral_norm_estimate(self.e.as_ref()))
    }
}

fn trimmed_degree(p: &PolyMatrix<c64>) -> Result<usize> {
    let d = p.trim(0.0).degree();
    if d == 0 {
        return Err(Error::DegenerateDegree(
            "a constant matrix has no pencil realization; compress P_0 directly".into(),
        ));
    }
    Ok(d)
}

fn put(dst: &mut Mat<c64>, r0: usize, c0: usize, src: &Matrix<c64>) {
    for i in 0..src.rows() {
        for j in 0..src.cols() {
            dst[(r0 + i, c0 + j)] = src[(i, j)];
        }
    }
}

/// Companion-like pencil of size `(dn + m) × (dn + n)`: block row `i < d`
/// is `[… I_n  −λI_n …]` starting at block column `i`, and the last block
/// row is `[P_d … P_1 P_0]`. The kernel of this pencil at `λ` is spanned
/// by `[λ^d x; …; λ x; x]` with `P(λ) x = 0`.
pub fn build_s_lambda(p: &PolyMatrix<c64>) -> Result<Pencil> {
    let d = trimmed_degree(p)?;
    let (m, n) = p.shape();
    let (rows, cols) = (d * n + m, (d + 1) * n);
    let mut a = Mat::zeros(rows, cols);
    let mut e = Mat::zeros(rows, cols);
    for i in 0..d * n {
        a[(i, i)] = c64::new(1.0, 0.0);
        e[(i, i + n)] = c64::new(1.0, 0.0);
    }
    for j in 0..=d {
        put(&mut a, d * n, j * n, &p.coeff(d - j));
    }
    Pencil::new(a, e)
}

/// Generalized state-space model `P(λ) = D − C (A − λE)^{-1} B` with state
/// dimension `(d + 1)n`.
#[derive(Clone, Debug)]
pub struct SystemMatrix {
    pub a: Mat<c64>,
    pub e: Mat<c64>,
    pub b: Mat<c64>,
    pub c: Mat<c64>,
    pub d: Mat<c64>,
    pub degree: usize,
}

impl SystemMatrix {
    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn outputs(&self) -> usize {
        self.c.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.b.ncols()
    }

    /// The full bordered pencil `[[A − λE, B], [C, D]]` as a pencil.
    pub fn bordered(&self) -> Result<Pencil> {
        let (s, m, n) = (self.state_dim(), self.outputs(), self.inputs());
        let mut a = Mat::zeros(s + m, s + n);
        let mut e = Mat::zeros(s + m, s + n);
        a.as_mut().get_mut(..s, ..s).copy_from(&self.a);
        a.as_mut().get_mut(..s, s..).copy_from(&self.b);
        a.as_mut().get_mut(s.., ..s).copy_from(&self.c);
        a.as_mut().get_mut(s.., s..).copy_from(&self.d);
        e.as_mut().get_mut(..s, ..s).copy_from(&self.e);
        Pencil::new(a, e)
    }

    /// Transfer function at `x`, by a dense solve of the state equations.
    pub fn transfer(&self, x: c64) -> Mat<c64> {
        let pencil = &self.a - &self.e * faer::Scale(x);
        let sol = pencil.partial_piv_lu().solve(self.b.as_ref());
        &self.d - &self.c * &sol
    }
}

/// State-space realization: `A = I`, `E` has `I_n` on the block
/// superdiagonal, `B = [0; …; 0; −I_n]`, `C = [P_d … P_1 P_0]`, `D = 0`.
pub fn build_s_p(p: &PolyMatrix<c64>) -> Result<SystemMatrix> {
    let d = trimmed_degree(p)?;
    let (m, n) = p.shape();
    let s = (d + 1) * n;
    let mut e = Mat::zeros(s, s);
    for i in 0..d * n {
        e[(i, i + n)] = c64::new(1.0, 0.0);
    }
    let mut b = Mat::zeros(s, n);
    for i in 0..n {
        b[(d * n + i, i)] = c64::new(-1.0, 0.0);
    }
    let mut c = Mat::zeros(m, s);
    for j in 0..=d {
        put(&mut c, 0, j * n, &p.coeff(d - j));
    }
    Ok(SystemMatrix {
        a: Mat::identity(s, s),
        e,
        b,
        c,
        d: Mat::zeros(m, n),
        degree: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_poly(c: &[f64]) -> PolyMatrix<c64> {
        PolyMatrix::from_entries(1, 1, |_, _| c.iter().map(|&v| c64::new(v, 0.0)).collect())
    }

    #[test]
    fn smallest_s_lambda() {
        // p(λ) = 3 + 2λ gives [[1, −λ], [2, 3]].
        let pen = build_s_lambda(&scalar_poly(&[3.0, 2.0])).unwrap();
        assert_eq!((pen.rows(), pen.cols()), (2, 2));
        let at = pen.eval(c64::new(0.5, 0.0));
        assert_eq!(at[(0, 0)], c64::new(1.0, 0.0));
        assert_eq!(at[(0, 1)], c64::new(-0.5, 0.0));
        assert_eq!(at[(1, 0)], c64::new(2.0, 0.0));
        assert_eq!(at[(1, 1)], c64::new(3.0, 0.0));
    }

    #[test]
    fn constant_input_rejected() {
        assert!(matches!(
            build_s_lambda(&scalar_poly(&[1.0])),
            Err(Error::DegenerateDegree(_))
        ));
        assert!(build_s_p(&scalar_poly(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn state_space_transfer_scalar() {
        let p = scalar_poly(&[1.0, -2.0, 0.5]);
        let sys = build_s_p(&p).unwrap();
        assert_eq!(sys.state_dim(), 3);
        let x = c64::new(0.3, -0.7);
        let want = p.eval(&x)[(0, 0)];
        assert!((sys.transfer(x)[(0, 0)] - want).norm() < 1e-14);
    }
}
