//! Feedback rows and the coefficient formulas for `G_c` and `N_r`.

use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::pencil::SystemStaircase;
use crate::polymat::{Matrix, PolyMatrix};
use crate::scalar::c64;

/// `[I_r 0] F = [0 … 0 [I_r 0]] − [0 | W] Z^H`, an `r × (d+1)n` matrix.
/// `W` sits on the part-3 and `C_4` columns of the staircase.
pub fn build_feedback(st: &SystemStaircase, w: MatRef<'_, c64>) -> Result<Mat<c64>> {
    let q = st.form.cols();
    let (_, ql) = st.form.leading();
    let n = q - st.state_rows;
    let r = w.nrows();
    if w.ncols() != q - ql || r > n {
        return Err(Error::InternalConsistency(format!(
            "embedding rows of shape {:?} do not fit a staircase with {} trailing columns and n = {n}",
            w.shape(),
            q - ql
        )));
    }
    let mut f = Mat::<c64>::zeros(r, q);
    for i in 0..r {
        f[(i, q - n + i)] = c64::new(1.0, 0.0);
    }
    let wz = w * st.form.z.as_ref().get(.., ql..).adjoint();
    Ok(f - wz)
}

/// `G_c(λ) = Σ G_i λ^i` with `G_0 = [I_r 0] − F̂_0` and `G_i = −F̂_i`,
/// where `F_row = [F̂_d … F̂_1 F̂_0]`.
pub fn gcrd_from_feedback(f_row: MatRef<'_, c64>, n: usize) -> Result<PolyMatrix<c64>> {
    let (r, q) = f_row.shape();
    if n == 0 || q % n != 0 || r > n {
        return Err(Error::InternalConsistency(format!(
            "feedback of width {q} is not a multiple of n = {n}"
        )));
    }
    let d = q / n - 1;
    let coeffs = (0..=d)
        .map(|i| {
            let block = d - i;
            Matrix::from_fn(r, n, |a, b| {
                let v = -f_row[(a, block * n + b)];
                if i == 0 && a == b {
                    v + c64::new(1.0, 0.0)
                } else {
                    v
                }
            })
        })
        .collect();
    PolyMatrix::new(r, n, coeffs)
}

/// `N_i = Ĉ (Â^{-1} Ê)^i Â^{-1} B̂` for `i = 0..=d`, where
/// `Â − λÊ = [A_3 − λE_3; W]`, `B̂ = [0; I_r]` and `Ĉ` holds the output rows
/// on the part-3 and `C_4` columns.
pub fn left_factor(st: &SystemStaircase, w: MatRef<'_, c64>, degree: usize) -> Result<PolyMatrix<c64>> {
    let (a3, e3) = st.part3_state();
    let (p3, q3) = a3.shape();
    let r = w.nrows();
    if p3 + r != q3 {
        return Err(Error::InternalConsistency(format!(
            "embedded pencil is {}x{q3}, not square",
            p3 + r
        )));
    }
    let (_, ql) = st.form.leading();
    let m = st.outputs();
    let c_hat = st.form.a.as_ref().get(st.state_rows.., ql..);
    if r == 0 {
        return Ok(PolyMatrix::zero(m, 0));
    }
    let mut a_hat = Mat::<c64>::zeros(q3, q3);
    a_hat.as_mut().get_mut(..p3, ..).copy_from(a3);
    a_hat.as_mut().get_mut(p3.., ..).copy_from(w);
    let mut e_hat = Mat::<c64>::zeros(q3, q3);
    e_hat.as_mut().get_mut(..p3, ..).copy_from(e3);
    let mut b_hat = Mat::<c64>::zeros(q3, r);
    for i in 0..r {
        b_hat[(p3 + i, i)] = c64::new(1.0, 0.0);
    }
    let lu = a_hat.partial_piv_lu();
    let mut x = lu.solve(&b_hat);
    let mut coeffs = Vec::with_capacity(degree + 1);
    for i in 0..=degree {
        coeffs.push(Matrix::from_faer((c_hat * &x).as_ref()));
        if i < degree {
            x = lu.solve(&e_hat * &x);
        }
    }
    PolyMatrix::new(m, r, coeffs)
}
