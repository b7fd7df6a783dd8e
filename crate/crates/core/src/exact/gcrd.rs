//! Exact greatest common right divisor of a stack of polynomial matrices.

use super::grid::PolyGrid;
use super::hermite::hermite_form;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ExactGcrd {
    /// `rows × n` divisor: the compact Hermite rows followed by zero rows.
    pub g: PolyGrid,
    /// Normal rank of the compound matrix.
    pub rank: usize,
}

/// GCRD of the vertically stacked `blocks` via the Hermite form of the
/// compound matrix. A compound with fewer rows than columns is padded with
/// zero rows first. `rows` defaults to the rank and must be at least it;
/// a zero compound has rank 0 and needs an explicit `rows`.
pub fn gcrd_exact(blocks: &[PolyGrid], rows: Option<usize>) -> Result<ExactGcrd> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::Shape("at least one block is required".into()))?;
    let n = first.cols();
    let mut compound = first.clone();
    for b in &blocks[1..] {
        compound = compound.vstack(b)?;
    }
    if compound.rows() < n {
        compound = compound.vstack(&PolyGrid::zeros(n - compound.rows(), n))?;
    }
    let h = hermite_form(&compound);
    let r = h.rank;
    let l = match rows {
        Some(l) if l < r => {
            return Err(Error::InvalidRequest {
                rank: r,
                reason: format!("requested {l} rows, fewer than the normal rank"),
            })
        }
        Some(l) => l,
        None if r == 0 => {
            return Err(Error::InvalidRequest {
                rank: 0,
                reason: "zero input: the number of divisor rows must be given".into(),
            })
        }
        None => r,
    };
    let g = h.compact().vstack(&PolyGrid::zeros(l - r, n))?;
    Ok(ExactGcrd { g, rank: r })
}
