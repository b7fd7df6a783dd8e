//! Unitary staircase reduction of a pencil `A − λE` into three diagonal
//! parts: right Kronecker blocks (part 1), a regular part carrying the
//! finite eigenvalues (part 2), and infinite eigenvalues together with left
//! Kronecker blocks (part 3).
//!
//! Stage 1 deflates part 3 from the bottom-right: compress the rows of the
//! active `E`, then compress the columns of `A` on the rows where `E`
//! vanished. It stops once the active `E` has full row rank. Stage 2 peels
//! part 1 off the top-left of what remains in the dual way.

use faer::{Mat, MatRef};

use super::linalg::{kernel_first, rank_above, svd};
use super::realize::{build_s_lambda, Pencil};
use crate::error::{Error, Result};
use crate::polymat::PolyMatrix;
use crate::scalar::c64;

/// Rank threshold relative to the pencil scale `max(‖A‖₂, ‖E‖₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    rel: f64,
}

impl Tolerance {
    pub fn new(rel: f64) -> Result<Self> {
        if !(rel > 0.0 && rel.is_finite()) {
            return Err(Error::InvalidRequest {
                rank: 0,
                reason: format!("tolerance must be positive and finite, got {rel}"),
            });
        }
        Ok(Self { rel })
    }

    pub fn rel(&self) -> f64 {
        self.rel
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: super::linalg::DEFAULT_TOL,
        }
    }
}

/// Result of [`staircase`]. `a` and `e` hold `Q^H A Z` and `Q^H E Z` with
/// every structural zero set exactly.
#[derive(Clone, Debug)]
pub struct StaircaseForm {
    pub q: Mat<c64>,
    pub z: Mat<c64>,
    pub a: Mat<c64>,
    pub e: Mat<c64>,
    /// Absolute rank threshold used for every decision.
    pub tau_abs: f64,
    /// `(rows, cols)` deflated into part 3 at each stage-1 step, in order.
    /// The first step's rows are the bottom rows of the pencil.
    pub infinite_steps: Vec<(usize, usize)>,
    /// `(rows, cols)` split off into part 1 at each stage-2 step, in order,
    /// starting at the top-left corner. `None` when stage 2 was skipped.
    pub kronecker_steps: Option<Vec<(usize, usize)>>,
    /// Frobenius norm of everything that was set to zero.
    pub discarded: f64,
}

impl StaircaseForm {
    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    /// Size of parts 1 and 2 together, which stage 1 leaves at the top-left.
    pub fn leading(&self) -> (usize, usize) {
        let zr: usize = self.infinite_steps.iter().map(|s| s.0).sum();
        let zc: usize = self.infinite_steps.iter().map(|s| s.1).sum();
        (self.rows() - zr, self.cols() - zc)
    }

    /// Number of right Kronecker blocks (excess of columns over rows in the
    /// leading part).
    pub fn right_kronecker_count(&self) -> usize {
        let (r, c) = self.leading();
        c - r
    }

    /// `(rows, cols)` of part 1, when stage 2 ran.
    pub fn part1(&self) -> Option<(usize, usize)> {
        self.kronecker_steps.as_ref().map(|s| {
            (s.iter().map(|x| x.0).sum(), s.iter().map(|x| x.1).sum())
        })
    }

    /// Order of the regular part 2, when stage 2 ran.
    pub fn regular_size(&self) -> Option<usize> {
        self.part1().map(|(r, _)| self.leading().0 - r)
    }

    pub fn part3(&self) -> (usize, usize) {
        let (r, c) = self.leading();
        (self.rows() - r, self.cols() - c)
    }

    /// `(A_22, E_22)` of the regular part.
    pub fn regular_block(&self) -> Option<(MatRef<'_, c64>, MatRef<'_, c64>)> {
        let (r1, c1) = self.part1()?;
        let k = self.regular_size()?;
        Some((
            self.a.as_ref().get(r1..r1 + k, c1..c1 + k),
            self.e.as_ref().get(r1..r1 + k, c1..c1 + k),
        ))
    }

    /// Finite eigenvalues of the regular part via the QZ algorithm.
    /// Requires stage 2.
    pub fn finite_eigenvalues(&self) -> Result<Vec<c64>> {
        let (a, e) = self
            .regular_block()
            .ok_or_else(|| Error::InvalidRequest {
                rank: 0,
                reason: "finite eigenvalues need the stage-2 split".into(),
            })?;
        if a.nrows() == 0 {
            return Ok(Vec::new());
        }
        // faer's QZ panics on 1×1 inputs (undersized workspace).
        if a.nrows() == 1 {
            return Ok(vec![a[(0, 0)] / e[(0, 0)]]);
        }
        let ev = a
            .to_owned()
            .generalized_eigen(e.to_owned())
            .map_err(|err| Error::Numerical(format!("QZ failed: {err:?}")))?;
        let (sa, sb) = (ev.S_a().column_vector(), ev.S_b().column_vector());
        Ok((0..a.nrows()).map(|i| sa[i] / sb[i]).collect())
    }

    /// Masks of the entries of `A` and `E` that the block structure forces
    /// to zero, derived from the recorded block sizes alone.
    pub fn structural_zeros(&self) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
        let (p, q) = (self.rows(), self.cols());
        let mut za = vec![vec![false; q]; p];
        let mut ze = vec![vec![false; q]; p];
        let (mut row_end, mut col_end) = (p, q);
        for &(zr, nc) in &self.infinite_steps {
            let (row_start, col_start) = (row_end - zr, col_end - nc);
            for i in row_start..row_end {
                za[i][..col_start].fill(true);
                ze[i][..col_end].fill(true);
            }
            row_end = row_start;
            col_end = col_start;
        }
        if let Some(steps) = &self.kronecker_steps {
            let (mut r0, mut c0) = (0, 0);
            for &(rho, c) in steps {
                for row in za.iter_mut().skip(r0 + rho) {
                    row[c0..c0 + c].fill(true);
                }
                for row in ze.iter_mut().skip(r0) {
                    row[c0..c0 + c].fill(true);
                }
                r0 += rho;
                c0 += c;
            }
        }
        (za, ze)
    }

    /// Norm of the entries of `Q^H (A, E) Z`, recomputed from the original
    /// pencil, that the block structure says are zero.
    pub fn structure_residual(&self, original: &Pencil) -> f64 {
        let ta = self.q.adjoint() * &original.a * &self.z;
        let te = self.q.adjoint() * &original.e * &self.z;
        let (za, ze) = self.structural_zeros();
        let mut acc = 0.0;
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if za[i][j] {
                    acc += ta[(i, j)].norm_sqr();
                }
                if ze[i][j] {
                    acc += te[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// `‖Q^H (A, E) Z − (a, e)‖_F`, recomputed from the original pencil.
    pub fn backward_error(&self, original: &Pencil) -> f64 {
        let ta = self.q.adjoint() * &original.a * &self.z - &self.a;
        let te = self.q.adjoint() * &original.e * &self.z - &self.e;
        (ta.norm_l2().powi(2) + te.norm_l2().powi(2)).sqrt()
    }
}

struct Work {
    a: Mat<c64>,
    e: Mat<c64>,
    q: Mat<c64>,
    z: Mat<c64>,
    discarded_sq: f64,
}

impl Work {
    /// Rows `r0..r1` of `A` and `E` ← `U^H ·` those rows; `Q` absorbs `U`.
    fn left(&mut self, r0: usize, r1: usize, u: MatRef<'_, c64>) {
        for m in [&mut self.a, &mut self.e] {
            let t = u.adjoint() * m.as_ref().get(r0..r1, ..);
            m.as_mut().get_mut(r0..r1, ..).copy_from(&t);
        }
        let t = self.q.as_ref().get(.., r0..r1) * u;
        self.q.as_mut().get_mut(.., r0..r1).copy_from(&t);
    }

    /// Columns `c0..c1` of `A`, `E` and `Z` ← those columns `· V`.
    fn right(&mut self, c0: usize, c1: usize, v: MatRef<'_, c64>) {
        for m in [&mut self.a, &mut self.e, &mut self.z] {
            let t = m.as_ref().get(.., c0..c1) * v;
            m.as_mut().get_mut(.., c0..c1).copy_from(&t);
        }
    }

    fn zero(&mut self, which_e: bool, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) {
        let m = if which_e { &mut self.e } else { &mut self.a };
        let mut block = m.as_mut().get_mut(rows, cols);
        self.discarded_sq += block.as_ref().norm_l2().powi(2);
        block.fill(c64::new(0.0, 0.0));
    }
}

fn stage1(w: &mut Work, tau_abs: f64, known_zero_rows: Option<usize>) -> Result<Vec<(usize, usize)>> {
    let (mut ra, mut ca) = (w.a.nrows(), w.a.ncols());
    let mut steps = Vec::new();
    let mut known = known_zero_rows;
    while ra > 0 {
        let zr = match known.take() {
            Some(k) => k,
            None => {
                let f = svd(w.e.as_ref().get(..ra, ..ca))?;
                let zr = ra - rank_above(&f.s, tau_abs);
                if zr == 0 {
                    break;
                }
                w.left(0, ra, f.u.as_ref());
                zr
            }
        };
        let top = ra - zr;
        w.zero(true, top..ra, 0..ca);
        let g = svd(w.a.as_ref().get(top..ra, ..ca))?;
        let nk = rank_above(&g.s, tau_abs);
        w.right(0, ca, kernel_first(g.v.as_ref(), nk).as_ref());
        w.zero(false, top..ra, 0..ca - nk);
        steps.push((zr, nk));
        ra = top;
        ca -= nk;
    }
    Ok(steps)
}

fn stage2(w: &mut Work, tau_abs: f64, pl: usize, ql: usize) -> Result<Vec<(usize, usize)>> {
    let (mut r0, mut c0) = (0, 0);
    let mut steps = Vec::new();
    while c0 < ql {
        let f = svd(w.e.as_ref().get(r0..pl, c0..ql))?;
        let rank = rank_above(&f.s, tau_abs);
        let c = (ql - c0) - rank;
        if c == 0 {
            break;
        }
        w.right(c0, ql, kernel_first(f.v.as_ref(), rank).as_ref());
        w.zero(true, r0..pl, c0..c0 + c);
        let g = svd(w.a.as_ref().get(r0..pl, c0..c0 + c))?;
        let rho = rank_above(&g.s, tau_abs);
        w.left(r0, pl, g.u.as_ref());
        w.zero(false, r0 + rho..pl, c0..c0 + c);
        steps.push((rho, c));
        r0 += rho;
        c0 += c;
    }
    if pl - r0 != ql - c0 {
        return Err(Error::InternalConsistency(format!(
            "regular part is {}x{}, not square; the rank tolerance is likely unsuitable",
            pl - r0,
            ql - c0
        )));
    }
    Ok(steps)
}

fn run(pencil: &Pencil, tol: Tolerance, stage2_on: bool, known_zero_rows: Option<usize>) -> Result<StaircaseForm> {
    let (p, q) = (pencil.rows(), pencil.cols());
    let tau_abs = tol.rel() * pencil.scale();
    let mut w = Work {
        a: pencil.a.clone(),
        e: pencil.e.clone(),
        q: Mat::identity(p, p),
        z: Mat::identity(q, q),
        discarded_sq: 0.0,
    };
    let infinite_steps = stage1(&mut w, tau_abs, known_zero_rows)?;
    let zr: usize = infinite_steps.iter().map(|s| s.0).sum();
    let zc: usize = infinite_steps.iter().map(|s| s.1).sum();
    let kronecker_steps = if stage2_on {
        Some(stage2(&mut w, tau_abs, p - zr, q - zc)?)
    } else {
        None
    };
    Ok(StaircaseForm {
        q: w.q,
        z: w.z,
        a: w.a,
        e: w.e,
        tau_abs,
        infinite_steps,
        kronecker_steps,
        discarded: w.discarded_sq.sqrt(),
    })
}

/// Staircase form of an arbitrary pencil. Stage 2 (splitting the right
/// Kronecker part from the regular part) runs only when `stage2` is set.
pub fn staircase(pencil: &Pencil, tol: Tolerance, stage2: bool) -> Result<StaircaseForm> {
    run(pencil, tol, stage2, None)
}

/// Staircase of the companion pencil of `P`, organised around the output
/// rows.
#[derive(Clone, Debug)]
pub struct SystemStaircase {
    pub form: StaircaseForm,
    /// The realized pencil (of the unit-norm input).
    pub pencil: Pencil,
    /// `dn`: rows of the pencil carrying `E`.
    pub state_rows: usize,
    /// Width of the full-column-rank output block `C_4` in the last columns.
    pub c4_cols: usize,
    /// Norm the input was divided by before realization.
    pub input_norm: f64,
}

impl SystemStaircase {
    pub fn outputs(&self) -> usize {
        self.form.rows() - self.state_rows
    }

    /// Part 3 restricted to the state rows, with the `C_4` columns.
    pub fn part3_state(&self) -> (MatRef<'_, c64>, MatRef<'_, c64>) {
        let (pl, ql) = self.form.leading();
        let f = &self.form;
        (
            f.a.as_ref().get(pl..self.state_rows, ql..),
            f.e.as_ref().get(pl..self.state_rows, ql..),
        )
    }

    /// Normal rank of `P`: `n` minus the number of right Kronecker blocks.
    /// Fails when the rank decisions produced more right Kronecker blocks
    /// than input columns, which only happens with an unsuitable tolerance.
    pub fn rank(&self) -> Result<usize> {
        (self.form.cols() - self.state_rows)
            .checked_sub(self.form.right_kronecker_count())
            .ok_or_else(|| {
                Error::InternalConsistency(format!(
                    "{} right Kronecker blocks exceed the {} input columns; the rank tolerance is likely unsuitable",
                    self.form.right_kronecker_count(),
                    self.form.cols() - self.state_rows
                ))
            })
    }
}

/// Staircase of `S_λ` for `P / ‖P‖_F`. The output rows carry no `λ`, so
/// the first row compression is skipped and the left transform acts on the
/// state rows only: `Q = Q_s ⊕ I_m`. The first column compression yields
/// the output block `C_4`.
pub fn staircase_system(p: &PolyMatrix<c64>, tol: Tolerance, stage2: bool) -> Result<SystemStaircase> {
    let input_norm = p.frob_norm();
    if input_norm == 0.0 {
        return Err(Error::InvalidRequest {
            rank: 0,
            reason: "zero input has no system staircase".into(),
        });
    }
    let pencil = build_s_lambda(&p.normalize())?;
    let m = p.rows();
    let state_rows = pencil.rows() - m;
    let form = run(&pencil, tol, stage2, Some(m))?;
    let c4_cols = form.infinite_steps[0].1;
    Ok(SystemStaircase {
        form,
        pencil,
        state_rows,
        c4_cols,
        input_norm,
    })
}
