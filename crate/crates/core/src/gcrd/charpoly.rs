//! Monic determinant polynomial of a square polynomial matrix, computed by
//! evaluation on the unit circle and an inverse discrete Fourier transform.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::pencil::linalg::singular_values;
use crate::polymat::PolyMatrix;
use crate::scalar::c64;

/// Coefficients below this fraction of the largest one are dropped from the
/// top before normalizing.
const TRIM_REL: f64 = 1e-10;

/// Ascending coefficients of `det G(λ)` scaled to be monic, for the leading
/// `r × r` block of `G` (`r` = row count). Fails with
/// [`Error::InvalidRequest`] when that block is singular.
pub fn gcrd_characteristic_poly(g: &PolyMatrix<c64>) -> Result<Vec<c64>> {
    let r = g.rows();
    if r > g.cols() {
        return Err(Error::Shape(format!(
            "characteristic polynomial needs at most as many rows as columns, got {:?}",
            g.shape()
        )));
    }
    if r == 0 {
        return Ok(vec![c64::new(1.0, 0.0)]);
    }
    let lead = g.col_slice(0, r);
    let bound = r * lead.degree();
    let count = bound + 1;
    let samples: Vec<c64> = (0..count)
        .map(|k| {
            let w = c64::from_polar(1.0, TAU * k as f64 / count as f64);
            lead.eval(&w).to_faer().determinant()
        })
        .collect();
    let mut coeffs: Vec<c64> = (0..count)
        .map(|j| {
            let s: c64 = samples
                .iter()
                .enumerate()
                .map(|(k, v)| v * c64::from_polar(1.0, -TAU * (j * k) as f64 / count as f64))
                .sum();
            s / count as f64
        })
        .collect();
    let big = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scale = lead.frob_norm().powi(r as i32);
    if big <= 1e-12 * scale {
        let probe = c64::new(0.6180339887, 0.3141592653);
        let s = singular_values(lead.eval(&probe).to_faer().as_ref())?;
        let tau = 1e-12 * s.first().copied().unwrap_or(0.0);
        return Err(Error::InvalidRequest {
            rank: s.iter().filter(|&&x| x > tau).count(),
            reason: "leading block of the divisor is singular".into(),
        });
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= TRIM_REL * big) {
        coeffs.pop();
    }
    let top = *coeffs.last().expect("non-empty");
    Ok(coeffs.into_iter().map(|c| c / top).collect())
}
