//! The full pipeline: stack, normalize, reduce, embed, read off `G_c` and
//! `N_r`, and handle the degenerate shapes.

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::embed::unimodular_embed;
use super::feedback::{build_feedback, gcrd_from_feedback, left_factor};
use crate::error::{Error, Result};
use crate::pencil::linalg::{rank_above, svd};
use crate::pencil::{staircase_system, Tolerance};
use crate::polymat::{vstack, Matrix, PolyMatrix};
use crate::scalar::c64;
use crate::verify::residual;

/// Top coefficients of `G_c` and `N_r` at or below this fraction of the
/// factor's norm are rounding noise and are dropped.
const TAIL_TRIM: f64 = 10.0 * f64::EPSILON;

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct ExtractOptions {
    pub tol: Tolerance,
    /// Requested number of divisor rows `ℓ`; defaults to the rank.
    pub rows: Option<usize>,
    /// Also split the right Kronecker part from the finite part. Not needed
    /// for the divisor; useful for structure reports.
    pub stage2: bool,
}


#[derive(Clone, Debug)]
pub struct GcrdResult {
    /// Computed normal rank `r`.
    pub rank: usize,
    /// Compact divisor, `r × n`, with orthonormal stacked rows.
    pub g_c: PolyMatrix<c64>,
    /// Left factor, `m × r`, with `P = N_r G_c`.
    pub n_r: PolyMatrix<c64>,
    /// `ℓ × n` divisor: `G_c` followed by zero rows.
    pub g: PolyMatrix<c64>,
    /// `m × ℓ` left factor: `N_r` followed by independent constant columns.
    pub n: PolyMatrix<c64>,
    /// Feedback rows `[I_r 0] F`; empty for the constant and zero paths.
    pub f_row: Mat<c64>,
    /// `‖P − N_r G_c‖_F` in the scale of the input.
    pub residual: f64,
    /// Frobenius norm of the compound input.
    pub input_norm: f64,
    pub tol: Tolerance,
    /// Absolute threshold applied to the unit-norm input.
    pub tau_abs: f64,
    /// `(rows, cols)` of each stage-1 deflation of the system staircase.
    pub stage_ranks: Vec<(usize, usize)>,
    /// Finite eigenvalues of the system pencil, when stage 2 ran.
    pub finite_zeros: Option<Vec<c64>>,
}

/// Compact GCRD `G_c` and left factor `N_r` with `P = N_r G_c`, where `P`
/// stacks `blocks` vertically.
pub fn extract_gcrd(blocks: &[PolyMatrix<c64>], opts: &ExtractOptions) -> Result<GcrdResult> {
    let (p, _) = vstack(blocks)?;
    let p = p.trim(0.0);
    if !p.is_finite() {
        return Err(Error::Numerical("input has non-finite coefficients".into()));
    }
    let (m, n) = p.shape();
    let input_norm = p.frob_norm();
    if input_norm == 0.0 {
        return zero_input(&p, opts);
    }
    let mut core = if p.degree() == 0 {
        constant_input(&p, opts)?
    } else if m < n {
        // Zero rows do not change the divisors; they give the staircase
        // enough output rows.
        let padded = vstack(&[p.clone(), PolyMatrix::zero(n - m, n)])?.0;
        let mut res = general_input(&padded, opts)?;
        res.n_r = res.n_r.row_slice(0, m);
        res
    } else {
        general_input(&p, opts)?
    };
    core.residual = residual(&p, &core.n_r, &core.g_c)?;
    finish(core, m, n, opts)
}

struct Core {
    rank: usize,
    g_c: PolyMatrix<c64>,
    n_r: PolyMatrix<c64>,
    f_row: Mat<c64>,
    residual: f64,
    input_norm: f64,
    tau_abs: f64,
    stage_ranks: Vec<(usize, usize)>,
    finite_zeros: Option<Vec<c64>>,
}

fn zero_input(p: &PolyMatrix<c64>, opts: &ExtractOptions) -> Result<GcrdResult> {
    let rows = opts.rows.ok_or_else(|| Error::InvalidRequest {
        rank: 0,
        reason: "zero input: the number of divisor rows must be given".into(),
    })?;
    let (m, n) = p.shape();
    let core = Core {
        rank: 0,
        g_c: PolyMatrix::zero(0, n),
        n_r: PolyMatrix::zero(m, 0),
        f_row: Mat::zeros(0, 0),
        residual: 0.0,
        input_norm: 0.0,
        tau_abs: 0.0,
        stage_ranks: Vec::new(),
        finite_zeros: None,
    };
    finish(core, m, n, &ExtractOptions { rows: Some(rows), ..opts.clone() })
}

/// `P_0 / ‖P‖ = U Σ V^H`: `G_c = V_r^H`, `N_r = ‖P‖ U_r Σ_r`.
fn constant_input(p: &PolyMatrix<c64>, opts: &ExtractOptions) -> Result<Core> {
    let nrm = p.frob_norm();
    let p0 = p.normalize().coeff(0).to_faer();
    let f = svd(p0.as_ref())?;
    let tau_abs = opts.tol.rel() * f.s.first().copied().unwrap_or(0.0);
    let r = rank_above(&f.s, tau_abs);
    let (m, n) = p.shape();
    let g = Matrix::from_fn(r, n, |i, j| f.v[(j, i)].conj());
    let nm = Matrix::from_fn(m, r, |i, j| f.u[(i, j)] * (f.s[j] * nrm));
    Ok(Core {
        rank: r,
        g_c: PolyMatrix::constant(g),
        n_r: PolyMatrix::constant(nm),
        f_row: Mat::zeros(0, 0),
        residual: 0.0,
        input_norm: nrm,
        tau_abs,
        stage_ranks: Vec::new(),
        finite_zeros: None,
    })
}

fn general_input(p: &PolyMatrix<c64>, opts: &ExtractOptions) -> Result<Core> {
    let d = p.degree();
    let n = p.cols();
    let st = staircase_system(p, opts.tol, opts.stage2)?;
    let r = st.rank()?;
    let (a3, e3) = st.part3_state();
    let w = unimodular_embed(a3, e3, st.form.tau_abs)?;
    if w.nrows() != r {
        return Err(Error::InternalConsistency(format!(
            "embedding produced {} rows for rank {r}",
            w.nrows()
        )));
    }
    let f_row = build_feedback(&st, w.as_ref())?;
    let g_c = gcrd_from_feedback(f_row.as_ref(), n)?.trim(TAIL_TRIM);
    let n_r = left_factor(&st, w.as_ref(), d)?
        .scale(&c64::new(st.input_norm, 0.0))
        .trim(TAIL_TRIM);
    let finite_zeros = if opts.stage2 {
        Some(st.form.finite_eigenvalues()?)
    } else {
        None
    };
    Ok(Core {
        rank: r,
        g_c,
        n_r,
        f_row,
        residual: 0.0,
        input_norm: st.input_norm,
        tau_abs: st.form.tau_abs,
        stage_ranks: st.form.infinite_steps.clone(),
        finite_zeros,
    })
}

/// Pads to `ℓ` rows: zero rows below `G_c`, and constant columns after
/// `N_r` that are orthonormal and orthogonal to the range of `N_r(0)`.
fn finish(core: Core, m: usize, n: usize, opts: &ExtractOptions) -> Result<GcrdResult> {
    let r = core.rank;
    let l = opts.rows.unwrap_or(r);
    if l < r {
        return Err(Error::InvalidRequest {
            rank: r,
            reason: format!("requested {l} rows, fewer than the normal rank"),
        });
    }
    let (g, nfull) = if l == r {
        (core.g_c.clone(), core.n_r.clone())
    } else {
        let g = vstack_zero_rows(&core.g_c, l - r, n)?;
        let ext = extension_columns(&core.n_r, l - r);
        let cols: Vec<Matrix<c64>> = (0..=core.n_r.degree())
            .map(|k| {
                let nk = core.n_r.coeff(k);
                let extra = if k == 0 { ext.clone() } else { Matrix::zeros(m, l - r) };
                Matrix::hstack(&[&nk, &extra])
            })
            .collect::<Result<_>>()?;
        (g, PolyMatrix::new(m, l, cols)?)
    };
    Ok(GcrdResult {
        rank: r,
        g_c: core.g_c,
        n_r: core.n_r,
        g,
        n: nfull,
        f_row: core.f_row,
        residual: core.residual,
        input_norm: core.input_norm,
        tol: opts.tol,
        tau_abs: core.tau_abs,
        stage_ranks: core.stage_ranks,
        finite_zeros: core.finite_zeros,
    })
}

fn vstack_zero_rows(g: &PolyMatrix<c64>, extra: usize, n: usize) -> Result<PolyMatrix<c64>> {
    let coeffs = g
        .coeffs()
        .iter()
        .map(|c| Matrix::vstack(&[c, &Matrix::zeros(extra, n)]))
        .collect::<Result<Vec<_>>>()?;
    PolyMatrix::new(g.rows() + extra, n, coeffs)
}

/// `extra` orthonormal columns completing the range of `N_r(0)`, from a QR
/// factorization of `[N_r(0) | random]` with a fixed seed. Columns beyond
/// the row count are zero.
fn extension_columns(n_r: &PolyMatrix<c64>, extra: usize) -> Matrix<c64> {
    let m = n_r.rows();
    let r = n_r.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut a = Mat::<c64>::zeros(m, r + extra);
    let n0 = n_r.coeff(0);
    for i in 0..m {
        for j in 0..r {
            a[(i, j)] = n0[(i, j)];
        }
        for j in r..r + extra {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            a[(i, j)] = c64::new(re, im);
        }
    }
    let q = if m == 0 { Mat::zeros(0, 0) } else { a.qr().compute_thin_Q() };
    Matrix::from_fn(m, extra, |i, j| {
        let col = r + j;
        if col < q.ncols() {
            q[(i, col)]
        } else {
            c64::new(0.0, 0.0)
        }
    })
}
