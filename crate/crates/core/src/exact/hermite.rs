//! Row Hermite normal form over ℚ[λ].

use super::grid::PolyGrid;
use super::poly::Poly;

#[derive(Clone, Debug)]
pub struct HermiteResult {
    /// Unimodular witness with `u · h = P`.
    pub u: PolyGrid,
    /// Inverse of `u`, so `u_inv · P = h`.
    pub u_inv: PolyGrid,
    pub h: PolyGrid,
    pub rank: usize,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl HermiteResult {
    /// The first `rank` rows of `h`.
    pub fn compact(&self) -> PolyGrid {
        self.h.row_slice(0, self.rank)
    }
}

/// Row operations applied to the working matrix and its left transform,
/// mirrored as inverse column operations on the witness.
struct Tracked {
    h: PolyGrid,
    t: PolyGrid,
    u: PolyGrid,
}

impl Tracked {
    fn swap(&mut self, i: usize, j: usize) {
        self.h.swap_rows(i, j);
        self.t.swap_rows(i, j);
        self.u.swap_cols(i, j);
    }

    /// `row_i += c · row_j`.
    fn add(&mut self, i: usize, j: usize, c: &Poly) {
        self.h.add_row(i, j, c);
        self.t.add_row(i, j, c);
        self.u.add_col(j, i, &c.neg());
    }

    fn scale(&mut self, i: usize, s: &crate::scalar::Rational) {
        self.h.scale_row(i, s);
        self.t.scale_row(i, s);
        self.u.scale_col(i, &s.recip());
    }
}

/// Computes `P = U H` with `H` in row Hermite form: echelon shape, monic
/// pivots moving strictly right, entries above each pivot of lower degree
/// than the pivot, and exactly `rank` nonzero rows.
pub fn hermite_form(p: &PolyGrid) -> HermiteResult {
    let m = p.rows();
    let mut w = Tracked {
        h: p.clone(),
        t: PolyGrid::identity(m),
        u: PolyGrid::identity(m),
    };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..p.cols() {
        if row == m {
            break;
        }
        // Euclid down the column until a single nonzero entry remains.
        loop {
            let best = (row..m)
                .filter(|&i| !w.h[(i, col)].is_zero())
                .min_by_key(|&i| w.h[(i, col)].degree());
            let Some(best) = best else { break };
            w.swap(row, best);
            let mut done = true;
            for i in row + 1..m {
                if w.h[(i, col)].is_zero() {
                    continue;
                }
                let (q, r) = w.h[(i, col)].div_rem(&w.h[(row, col)]);
                w.add(i, row, &q.neg());
                if !r.is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if w.h[(row, col)].is_zero() {
            continue;
        }
        let lead = w.h[(row, col)].lead().expect("nonzero pivot").recip();
        w.scale(row, &lead);
        for i in 0..row {
            let q = w.h[(i, col)].div_rem(&w.h[(row, col)]).0;
            w.add(i, row, &q.neg());
        }
        pivots.push(col);
        row += 1;
    }
    HermiteResult {
        u: w.u,
        u_inv: w.t,
        h: w.h,
        rank: row,
        pivots,
    }
}

/// Checks the four Hermite-form conditions on `h` for the given rank and
/// pivot columns.
pub fn is_hermite(h: &PolyGrid, rank: usize, pivots: &[usize]) -> bool {
    if pivots.len() != rank || pivots.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    for i in rank..h.rows() {
        if !h.row_is_zero(i) {
            return false;
        }
    }
    for (i, &pc) in pivots.iter().enumerate() {
        if (0..pc).any(|j| !h[(i, j)].is_zero()) || !h[(i, pc)].is_monic() {
            return false;
        }
        let pd = h[(i, pc)].degree();
        for k in 0..h.rows() {
            if k == i {
                continue;
            }
            let e = &h[(k, pc)];
            if k > i && !e.is_zero() {
                return false;
            }
            if k < i && !e.is_zero() && e.degree() >= pd {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::grid::is_unimodular;

    fn g(rows: &[Vec<Vec<i64>>]) -> PolyGrid {
        PolyGrid::from_int_rows(rows)
    }

    fn check(p: &PolyGrid, res: &HermiteResult) {
        assert_eq!(res.u.mul(&res.h).unwrap(), *p);
        assert_eq!(res.u_inv.mul(p).unwrap(), res.h);
        assert!(is_unimodular(&res.u).unwrap());
        assert!(is_hermite(&res.h, res.rank, &res.pivots));
    }

    #[test]
    fn identity_is_fixed() {
        let p = PolyGrid::identity(3);
        let res = hermite_form(&p);
        assert_eq!(res.h, p);
        assert_eq!(res.u, p);
        assert_eq!(res.rank, 3);
    }

    #[test]
    fn already_hermite() {
        let p = g(&[vec![vec![0, 1], vec![1]], vec![vec![], vec![0, 1]]]);
        let res = hermite_form(&p);
        assert_eq!(res.h, p);
        assert_eq!(res.u, PolyGrid::identity(2));
    }

    #[test]
    fn two_by_two_reduction() {
        // Rows (λ, λ²) and (λ, λ): subtracting gives (0, λ² − λ); the
        // entry above that pivot is then λ², reduced modulo λ² − λ to λ.
        let p = g(&[vec![vec![0, 1], vec![0, 0, 1]], vec![vec![0, 1], vec![0, 1]]]);
        let res = hermite_form(&p);
        check(&p, &res);
        let expected = g(&[vec![vec![0, 1], vec![0, 1]], vec![vec![], vec![0, -1, 1]]]);
        assert_eq!(res.h, expected);
        assert_eq!(res.rank, 2);
    }

    #[test]
    fn rank_deficient() {
        // Second row is λ times the first.
        let p = g(&[
            vec![vec![1, 1], vec![2]],
            vec![vec![0, 1, 1], vec![0, 2]],
            vec![vec![], vec![]],
        ]);
        let res = hermite_form(&p);
        check(&p, &res);
        assert_eq!(res.rank, 1);
        assert_eq!(res.pivots, vec![0]);
    }
}
