//! Dense complex kernels used by the staircase reduction: SVD-based rank
//! decisions and unitary compressions.

use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::scalar::c64;

/// Default relative rank threshold, `1000 · ε`.
pub const DEFAULT_TOL: f64 = 1000.0 * f64::EPSILON;

/// Relative rank threshold used for large random experiments, `10^4 · ε`.
pub const LARGE_TOL: f64 = 1.0e4 * f64::EPSILON;

pub struct SvdParts {
    pub u: Mat<c64>,
    /// Nonincreasing singular values, `min(rows, cols)` of them.
    pub s: Vec<f64>,
    pub v: Mat<c64>,
}

/// Full SVD `M = U diag(s) V^H`. Empty matrices get identity factors.
pub fn svd(m: MatRef<'_, c64>) -> Result<SvdParts> {
    let (r, c) = (m.nrows(), m.ncols());
    if r == 0 || c == 0 {
        return Ok(SvdParts {
            u: Mat::identity(r, r),
            s: Vec::new(),
            v: Mat::identity(c, c),
        });
    }
    let f = m.svd().map_err(|e| Error::Numerical(format!("SVD did not converge: {e:?}")))?;
    let s = (0..r.min(c)).map(|i| f.S().column_vector()[i].re).collect();
    Ok(SvdParts {
        u: f.U().to_owned(),
        s,
        v: f.V().to_owned(),
    })
}

pub fn singular_values(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    m.singular_values()
        .map_err(|e| Error::Numerical(format!("SVD did not converge: {e:?}")))
}

/// Number of singular values strictly above `tau_abs`.
pub fn rank_above(s: &[f64], tau_abs: f64) -> usize {
    s.iter().take_while(|&&x| x > tau_abs).count()
}

/// Unitary `U` such that the last `rows − ρ` rows of `U^H M` are below
/// `tau_rel · σ_max(M)`; returns `(U, ρ)`.
pub fn row_compress(m: MatRef<'_, c64>, tau_rel: f64) -> Result<(Mat<c64>, usize)> {
    let f = svd(m)?;
    let tau_abs = tau_rel * f.s.first().copied().unwrap_or(0.0);
    Ok((f.u, rank_above(&f.s, tau_abs)))
}

/// Unitary `V` such that the last `cols − ρ` columns of `M V` are below
/// `tau_rel · σ_max(M)`; returns `(V, ρ)`.
pub fn col_compress(m: MatRef<'_, c64>, tau_rel: f64) -> Result<(Mat<c64>, usize)> {
    let f = svd(m)?;
    let tau_abs = tau_rel * f.s.first().copied().unwrap_or(0.0);
    Ok((f.v, rank_above(&f.s, tau_abs)))
}

/// Spectral norm estimate by power iteration on `M^H M`. Accurate to a few
/// digits, which is all a rank threshold needs.
pub fn spectral_norm_estimate(m: MatRef<'_, c64>) -> f64 {
    let c = m.ncols();
    if m.nrows() == 0 || c == 0 {
        return 0.0;
    }
    let mut x = Mat::<c64>::from_fn(c, 1, |i, _| c64::new(1.0 + (i % 7) as f64 * 0.1, (i % 3) as f64 * 0.05));
    let mut est = 0.0;
    for _ in 0..60 {
        let nx = x.norm_l2();
        if nx == 0.0 {
            break;
        }
        x = &x * faer::Scale(c64::new(1.0 / nx, 0.0));
        let y = m * &x;
        let ny = y.norm_l2();
        if ny == 0.0 {
            // x landed in the kernel; fall back to the Frobenius bound.
            return m.norm_l2();
        }
        let prev = est;
        est = ny;
        x = m.adjoint() * &y;
        if (est - prev).abs() <= 1e-6 * est {
            break;
        }
    }
    est
}

/// `‖Q^H Q − I‖_F`.
pub fn unitarity_defect(q: MatRef<'_, c64>) -> f64 {
    let g = q.adjoint() * q;
    let n = g.nrows();
    let mut acc = 0.0;
    for j in 0..g.ncols() {
        for i in 0..n {
            let d = if i == j { g[(i, j)] - c64::new(1.0, 0.0) } else { g[(i, j)] };
            acc += d.norm_sqr();
        }
    }
    acc.sqrt()
}

/// Columns reordered so that the trailing `rank` columns come first.
/// Turns an SVD right factor (range first) into a kernel-first basis.
pub fn kernel_first(v: MatRef<'_, c64>, rank: usize) -> Mat<c64> {
    let c = v.ncols();
    Mat::from_fn(v.nrows(), c, |i, j| {
        let src = if j < c - rank { rank + j } else { j - (c - rank) };
        v[(i, src)]
    })
}
