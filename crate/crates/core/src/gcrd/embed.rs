//! Completion of a wide pencil without finite or infinite zeros to a square
//! unimodular pencil by appending constant rows.

use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::pencil::linalg::{kernel_first, rank_above, svd};
use crate::scalar::c64;

/// Returns `W` (`(q − p) × q`, orthonormal rows) such that
/// `[A − λE; W]` has a nonzero constant determinant.
///
/// Requires `E` (`p × q`, `p ≤ q`) of full row rank and `A − λE` of full
/// row rank at every finite `λ`; both are checked during the construction
/// and reported as [`Error::InternalConsistency`] when they fail.
///
/// Rank decisions on `E` use `tau_abs`. The controllability decisions use
/// `√tau_abs`: structural zeros of a non-generic Kronecker structure are
/// perturbed far more than the backward error of the reduction that
/// produced the block, and a spurious nonzero there leaves `[A; W]` nearly
/// singular.
///
/// Writing the pencil as a descriptor system `x' = Ã x + B̃ u` (the kernel
/// columns of `E` are the inputs), a controllability staircase makes `Ã`
/// block upper Hessenberg with full-row-rank subdiagonal blocks `A_{i+1,i}`.
/// `W` is then made of the unused input directions and, for each state
/// block, the kernel of `A_{i+1,i}` (all of the last block). Any kernel
/// vector of the completed pencil vanishes block by block, from the last
/// state block up to the inputs, so the determinant has no roots.
pub fn unimodular_embed(a: MatRef<'_, c64>, e: MatRef<'_, c64>, tau_abs: f64) -> Result<Mat<c64>> {
    let (p, q) = a.shape();
    if e.shape() != (p, q) || p > q {
        return Err(Error::InternalConsistency(format!(
            "cannot embed a {p}x{q} pencil: it must be wide with matching coefficients"
        )));
    }
    let c = q - p;
    if p == 0 {
        return Ok(Mat::identity(q, q));
    }

    // E Y = [0 | Ê] with Ê invertible.
    let fe = svd(e)?;
    if rank_above(&fe.s, tau_abs) != p {
        return Err(Error::InternalConsistency(
            "λ-coefficient of the block to embed is not of full row rank".into(),
        ));
    }
    let tau_ctrl = tau_abs.sqrt().max(tau_abs);
    let y = kernel_first(fe.v.as_ref(), p);
    let ay = a * &y;
    let e_hat = e * y.as_ref().get(.., c..);
    let lu = e_hat.partial_piv_lu();
    let a_t = lu.solve(ay.as_ref().get(.., c..));
    let b_t = lu.solve(ay.as_ref().get(.., ..c));

    // Input compression: B̃ V = [B_1 | 0].
    let fb = svd(b_t.as_ref())?;
    let rho1 = rank_above(&fb.s, tau_ctrl);
    if rho1 == 0 {
        return Err(Error::InternalConsistency(
            "block to embed has an uncontrollable state part (finite zeros)".into(),
        ));
    }
    let mut w_new = Mat::<c64>::zeros(c, q);
    for (k, j) in (rho1..c).enumerate() {
        w_new[(k, j)] = c64::new(1.0, 0.0);
    }
    let mut next_row = c - rho1;

    // State staircase, starting from the range of B̃.
    let mut u_tot = fb.u;
    let mut at = u_tot.adjoint() * &a_t * &u_tot;
    let (mut s0, mut rho) = (0, rho1);
    loop {
        let rest = s0 + rho;
        if rest == p {
            for k in 0..rho {
                w_new[(next_row + k, c + s0 + k)] = c64::new(1.0, 0.0);
            }
            next_row += rho;
            break;
        }
        let f = svd(at.as_ref().get(rest.., s0..rest))?;
        let rho_next = rank_above(&f.s, tau_ctrl);
        if rho_next == 0 {
            return Err(Error::InternalConsistency(format!(
                "block to embed has an uncontrollable state part of order {} (finite zeros)",
                p - rest
            )));
        }
        for k in 0..rho - rho_next {
            for t in 0..rho {
                w_new[(next_row + k, c + s0 + t)] = f.v[(t, rho_next + k)].conj();
            }
        }
        next_row += rho - rho_next;
        let um = f.u;
        let t = um.adjoint() * at.as_ref().get(rest.., ..);
        at.as_mut().get_mut(rest.., ..).copy_from(&t);
        let t = at.as_ref().get(.., rest..) * &um;
        at.as_mut().get_mut(.., rest..).copy_from(&t);
        let t = u_tot.as_ref().get(.., rest..) * &um;
        u_tot.as_mut().get_mut(.., rest..).copy_from(&t);
        s0 = rest;
        rho = rho_next;
    }
    debug_assert_eq!(next_row, c);

    // Back to the original coordinates: [u; x] = blkdiag(V, U) [u_new; x_new]
    // and the pencil columns are Y [u; x].
    let mut back = Mat::<c64>::zeros(q, q);
    back.as_mut().get_mut(..c, ..c).copy_from(fb.v.adjoint());
    back.as_mut().get_mut(c.., c..).copy_from(u_tot.adjoint());
    Ok(w_new * back * y.adjoint())
}

/// `det [A − λE; W]` at each point, for checking unimodularity.
pub fn embedded_determinants(
    a: MatRef<'_, c64>,
    e: MatRef<'_, c64>,
    w: MatRef<'_, c64>,
    points: &[c64],
) -> Vec<c64> {
    let (p, q) = a.shape();
    points
        .iter()
        .map(|&x| {
            let mut m = Mat::<c64>::zeros(p + w.nrows(), q);
            let pen = a - e * faer::Scale(x);
            m.as_mut().get_mut(..p, ..).copy_from(&pen);
            m.as_mut().get_mut(p.., ..).copy_from(w);
            if m.nrows() == 0 {
                c64::new(1.0, 0.0)
            } else {
                m.determinant()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::linalg::unitarity_defect;

    fn real(rows: &[&[f64]]) -> Mat<c64> {
        Mat::from_fn(rows.len(), rows[0].len(), |i, j| c64::new(rows[i][j], 0.0))
    }

    fn assert_constant_det(a: &Mat<c64>, e: &Mat<c64>, w: &Mat<c64>) {
        let pts = [c64::new(0.0, 0.0), c64::new(1.7, -0.4), c64::new(-3.0, 2.0)];
        let d = embedded_determinants(a.as_ref(), e.as_ref(), w.as_ref(), &pts);
        assert!(d[0].norm() > 1e-8);
        for x in &d[1..] {
            assert!((x - d[0]).norm() <= 1e-10 * d[0].norm(), "{d:?}");
        }
    }

    #[test]
    fn empty_block() {
        let w = unimodular_embed(Mat::<c64>::zeros(0, 0).as_ref(), Mat::<c64>::zeros(0, 0).as_ref(), 1e-12)
            .unwrap();
        assert_eq!(w.shape(), (0, 0));
    }

    #[test]
    fn one_by_two() {
        // [1, −λ]: the completion [0, 1] (up to a unit) gives determinant 1.
        let a = real(&[&[1.0, 0.0]]);
        let e = real(&[&[0.0, 1.0]]);
        let w = unimodular_embed(a.as_ref(), e.as_ref(), 1e-12).unwrap();
        assert_eq!(w.shape(), (1, 2));
        assert!(w[(0, 0)].norm() < 1e-15);
        assert!((w[(0, 1)].norm() - 1.0).abs() < 1e-15);
        assert_constant_det(&a, &e, &w);
    }

    #[test]
    fn integrator_chain() {
        // Columns (u, x1, x2) with x1' = x2 and x2' = u:
        // rows [0, −λ, 1] and [1, 0, −λ]; only x1 is left to pin down.
        let a = real(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        let e = real(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let w = unimodular_embed(a.as_ref(), e.as_ref(), 1e-12).unwrap();
        assert_eq!(w.shape(), (1, 3));
        assert!((w[(0, 1)].norm() - 1.0).abs() < 1e-14);
        assert_constant_det(&a, &e, &w);
    }

    #[test]
    fn unused_inputs_and_mixed_blocks() {
        // Columns (u1, u2, x1, x2, x3): x1' = u1 + u2, x2' = x1, x3' = x1.
        let a = real(&[
            &[1.0, 1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0, 0.0],
        ]);
        let e = real(&[
            &[0.0, 0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 1.0],
        ]);
        // x2 − x3 is never reached: the pencil has a zero at λ = 0.
        assert!(unimodular_embed(a.as_ref(), e.as_ref(), 1e-12).is_err());
        let a = real(&[
            &[1.0, 1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 1.0, 0.0],
        ]);
        let w = unimodular_embed(a.as_ref(), e.as_ref(), 1e-12).unwrap();
        assert_eq!(w.shape(), (2, 5));
        let wh = Mat::from_fn(5, 2, |i, j| w[(j, i)].conj());
        assert!(unitarity_defect(wh.as_ref()) < 1e-13);
        assert_constant_det(&a, &e, &w);
    }

    #[test]
    fn finite_zero_is_rejected() {
        // λ − 2 in a 1×1 block has a finite zero and no inputs to embed.
        let a = real(&[&[2.0, 0.0]]);
        let e = real(&[&[1.0, 0.0]]);
        assert!(matches!(
            unimodular_embed(a.as_ref(), e.as_ref(), 1e-12),
            Err(Error::InternalConsistency(_))
        ));
    }
}
