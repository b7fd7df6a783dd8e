//! Diagnostics for computed factorizations: residuals, conditioning at
//! zeros, root-polynomial residuals at the origin, and a cross-check of the
//! floating-point engine against the exact one.

use faer::Mat;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{gcrd_exact, right_divide, PolyGrid};
use crate::gcrd::{extract_gcrd, ExtractOptions, GcrdResult};
use crate::pencil::linalg::{rank_above, singular_values, svd};
use crate::pencil::Tolerance;
use crate::polymat::{vstack, Matrix, PolyMatrix};
use crate::scalar::{c64, Rational, Scalar};

/// `‖P − N G‖_F` over all coefficients.
pub fn residual<T: Scalar>(p: &PolyMatrix<T>, n: &PolyMatrix<T>, g: &PolyMatrix<T>) -> Result<f64> {
    Ok(p.sub(&n.mul(g)?)?.frob_norm())
}

/// `σ_r / σ_1` of `G(λ_i)` for each zero, `r` the row count of `G`
/// (capped at the column count). A zero matrix gives 0.
pub fn zero_conditioning(g: &PolyMatrix<c64>, zeros: &[c64]) -> Result<Vec<f64>> {
    let r = g.rows().min(g.cols());
    zeros
        .iter()
        .map(|z| {
            if r == 0 {
                return Ok(0.0);
            }
            let s = singular_values(g.eval(z).to_faer().as_ref())?;
            Ok(if s[0] == 0.0 { 0.0 } else { s[r - 1] / s[0] })
        })
        .collect()
}

/// `(‖G(0) e_1‖, ‖G'(0) e_1 − G(0) e_2‖)`.
pub fn root_poly_check(g: &PolyMatrix<c64>) -> Result<(f64, f64)> {
    if g.cols() < 2 {
        return Err(Error::Shape(format!(
            "root-polynomial check needs two columns, got {}",
            g.cols()
        )));
    }
    let (g0, g1) = (g.coeff(0), g.coeff(1));
    let rho3 = (0..g.rows()).map(|i| g0[(i, 0)].norm_sqr()).sum::<f64>().sqrt();
    let rho4 = (0..g.rows())
        .map(|i| (g1[(i, 0)] - g0[(i, 1)]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((rho3, rho4))
}

/// Condition number `σ_1 / σ_r` of `G(x)`; infinite when singular.
pub fn condition_at(g: &PolyMatrix<c64>, x: c64) -> Result<f64> {
    let r = g.rows().min(g.cols());
    if r == 0 {
        return Ok(1.0);
    }
    let s = singular_values(g.eval(&x).to_faer().as_ref())?;
    Ok(if s[r - 1] == 0.0 { f64::INFINITY } else { s[0] / s[r - 1] })
}

/// Where the zeros used for conditioning checks came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroSource {
    Planted,
    Staircase,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub rank: usize,
    pub rho1: f64,
    /// Condition number of `G_c` at `point`.
    pub rho2: f64,
    pub point: [f64; 2],
    pub rho3: Option<f64>,
    pub rho4: Option<f64>,
    pub kappa_inv: Vec<f64>,
    pub zero_source: ZeroSource,
    pub norm_n: f64,
    pub norm_g: f64,
    pub tol: f64,
}

/// Collects the diagnostics of a computed factorization of `P`.
pub fn diagnostics(
    p: &PolyMatrix<c64>,
    res: &GcrdResult,
    point: c64,
    zeros: &[c64],
    zero_source: ZeroSource,
) -> Result<DiagnosticsReport> {
    let (rho3, rho4) = match root_poly_check(&res.g_c) {
        Ok((a, b)) => (Some(a), Some(b)),
        Err(_) => (None, None),
    };
    Ok(DiagnosticsReport {
        rank: res.rank,
        rho1: residual(p, &res.n_r, &res.g_c)?,
        rho2: condition_at(&res.g_c, point)?,
        point: [point.re, point.im],
        rho3,
        rho4,
        kappa_inv: zero_conditioning(&res.g_c, zeros)?,
        zero_source,
        norm_n: res.n_r.frob_norm(),
        norm_g: res.g_c.frob_norm(),
        tol: res.tol.rel(),
    })
}

/// Least-squares right division: the `Q` of degree at most `degree`
/// minimizing `‖Q D − P‖_F`, and that relative residual
/// `‖Q D − P‖_F / max(1, ‖P‖_F)`.
pub fn approx_right_divide(
    p: &PolyMatrix<c64>,
    d: &PolyMatrix<c64>,
    degree: usize,
) -> Result<(PolyMatrix<c64>, f64)> {
    if p.cols() != d.cols() {
        return Err(Error::Shape(format!(
            "cannot right-divide {:?} by {:?}",
            p.shape(),
            d.shape()
        )));
    }
    let (m, n) = p.shape();
    let k = d.rows();
    let dd = d.degree();
    let top = (degree + dd).max(p.degree());
    // Transposed block-convolution system A X = B, X = [Q_0^T; …; Q_e^T].
    let a = Mat::<c64>::from_fn(n * (top + 1), k * (degree + 1), |row, col| {
        let (t, ri) = (row / n, row % n);
        let (i, ci) = (col / k, col % k);
        match t.checked_sub(i) {
            Some(s) if s <= dd => d.coeffs()[s][(ci, ri)],
            _ => c64::new(0.0, 0.0),
        }
    });
    let b = Mat::<c64>::from_fn(n * (top + 1), m, |row, col| {
        let t = row / n;
        if t <= p.degree() {
            p.coeffs()[t][(col, row % n)]
        } else {
            c64::new(0.0, 0.0)
        }
    });
    let f = svd(a.as_ref())?;
    let keep = rank_above(&f.s, 1e-12 * f.s.first().copied().unwrap_or(0.0));
    let ut_b = f.u.as_ref().get(.., ..keep).adjoint() * &b;
    let scaled = Mat::<c64>::from_fn(keep, m, |i, j| ut_b[(i, j)] / f.s[i]);
    let x = f.v.as_ref().get(.., ..keep) * &scaled;
    let coeffs = (0..=degree)
        .map(|s| Matrix::from_fn(m, k, |i, j| x[(s * k + j, i)]))
        .collect();
    let q = PolyMatrix::new(m, k, coeffs)?;
    let res = residual(p, &q, d)? / p.frob_norm().max(1.0);
    Ok((q, res))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub exact_rank: usize,
    pub numeric_rank: usize,
    /// Ranks of `P(λ_0)`, exact `G(λ_0)` and numeric `G_c(λ_0)` agree at every
    /// sampled rational point.
    pub kernel_dims_agree: bool,
    pub exact_divides_blocks: bool,
    /// `G_c` rounded entry-wise to nearby rationals; `None` when it has
    /// imaginary parts or entries that do not round.
    pub rationalized: Option<Vec<Vec<Vec<String>>>>,
    /// Relative residual of `G_exact ≈ Q G_c`.
    pub exact_by_numeric: f64,
    /// Relative residual of `G_c ≈ Q G_exact`.
    pub numeric_by_exact: f64,
    pub numeric_residual: f64,
    pub pass: bool,
}

/// Threshold for the mutual-division residuals of [`cross_check`].
pub const CROSS_CHECK_DIVISION_TOL: f64 = 1e-6;

/// Continued-fraction approximation `p/q` of `x` with
/// `|x − p/q| ≤ tol · max(1, |x|)`. `None` for non-finite `x` or when the
/// convergents overflow before reaching the tolerance.
pub fn rationalize(x: f64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let target = tol * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e18 {
            return None;
        }
        let ai = a as i128;
        let h = ai.checked_mul(h1)?.checked_add(h0)?;
        let k = ai.checked_mul(k1)?.checked_add(k0)?;
        (h0, h1, k0, k1) = (h1, h, k1, k);
        if (x - h as f64 / k as f64).abs() <= target {
            return Some(Rational::new(h.into(), k.into()));
        }
        let frac = rest - a;
        if frac == 0.0 {
            return Some(Rational::new(h.into(), k.into()));
        }
        rest = 1.0 / frac;
    }
    None
}

/// Entry-wise [`rationalize`] of a matrix whose imaginary parts are at
/// most `tol`.
pub fn rationalize_matrix(p: &PolyMatrix<c64>, tol: f64) -> Option<PolyMatrix<Rational>> {
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| {
            let mut rows = Vec::with_capacity(c.rows());
            for i in 0..c.rows() {
                let mut row = Vec::with_capacity(c.cols());
                for z in c.row(i) {
                    if z.im.abs() > tol {
                        return None;
                    }
                    row.push(rationalize(z.re, tol)?);
                }
                rows.push(row);
            }
            Some(Matrix::from_fn(c.rows(), c.cols(), |i, j| rows[i][j].clone()))
        })
        .collect::<Option<Vec<_>>>()?;
    PolyMatrix::new(p.rows(), p.cols(), coeffs).ok()
}

/// Rounding tolerance for [`rationalize_matrix`] in [`cross_check`].
pub const RATIONALIZE_TOL: f64 = 1e-10;

fn exact_rank(m: &Matrix<Rational>) -> usize {
    let mut rows: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let piv = rows[rank][c].clone();
        for i in rank + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] / &piv;
            let (top, rest) = rows.split_at_mut(i);
            for (x, y) in rest[0][c..].iter_mut().zip(&top[rank][c..]) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

/// Runs both engines on rational `blocks` and compares rank, pointwise
/// kernel dimensions and mutual divisibility of the two divisors.
pub fn cross_check(blocks: &[PolyMatrix<Rational>], tol: Tolerance, seed: u64) -> Result<CrossCheckReport> {
    let grids: Vec<PolyGrid> = blocks.iter().map(PolyGrid::from_poly_matrix).collect();
    let exact = gcrd_exact(&grids, None)?;
    let exact_divides_blocks = grids.iter().all(|b| right_divide(b, &exact.g).is_ok());
    let cblocks: Vec<PolyMatrix<c64>> = blocks.iter().map(PolyMatrix::to_c64).collect();
    let numeric = extract_gcrd(
        &cblocks,
        &ExtractOptions {
            tol,
            ..ExtractOptions::default()
        },
    )?;
    let (compound, _) = vstack(blocks)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kernel_dims_agree = true;
    for _ in 0..3 {
        let x = Rational::new(rng.random_range(-40i64..=40).into(), rng.random_range(7i64..=29).into());
        let rp = exact_rank(&compound.eval(&x));
        let rg = exact_rank(&exact.g.eval(&x));
        let gc = numeric.g_c.eval(&x.to_c64()).to_faer();
        let s = singular_values(gc.as_ref())?;
        let rn = rank_above(&s, 1e-8 * s.first().copied().unwrap_or(0.0));
        kernel_dims_agree &= rp == rg && rg == rn;
    }

    let ge = exact.g.to_poly_matrix().to_c64();
    let r = exact.rank;
    let rationalized = rationalize_matrix(&numeric.g_c, RATIONALIZE_TOL);
    let (exact_by_numeric, numeric_by_exact) = if r == 0 {
        (0.0, 0.0)
    } else if let Some(gq) = rationalized.as_ref() {
        let gn = gq.to_c64();
        let deg1 = ge.degree() + r.saturating_sub(1) * gn.degree();
        let deg2 = gn.degree() + r.saturating_sub(1) * ge.degree();
        (
            approx_right_divide(&ge, &gn, deg1)?.1,
            approx_right_divide(&gn, &ge, deg2)?.1,
        )
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    let pass = exact.rank == numeric.rank
        && kernel_dims_agree
        && exact_divides_blocks
        && exact_by_numeric <= CROSS_CHECK_DIVISION_TOL
        && numeric_by_exact <= CROSS_CHECK_DIVISION_TOL;
    Ok(CrossCheckReport {
        exact_rank: exact.rank,
        numeric_rank: numeric.rank,
        kernel_dims_agree,
        exact_divides_blocks,
        rationalized: rationalized.map(|g| {
            g.coeffs()
                .iter()
                .map(|c| (0..c.rows()).map(|i| c.row(i).iter().map(|x| x.to_string()).collect()).collect())
                .collect()
        }),
        exact_by_numeric,
        numeric_by_exact,
        numeric_residual: numeric.residual,
        pass,
    })
}
