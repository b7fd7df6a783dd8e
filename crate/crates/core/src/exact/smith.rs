//! Smith normal form over ℚ[λ].

use super::grid::PolyGrid;
use super::poly::Poly;
use crate::scalar::Rational;

#[derive(Clone, Debug)]
pub struct SmithResult {
    /// `u · s · v = P`.
    pub u: PolyGrid,
    pub s: PolyGrid,
    pub v: PolyGrid,
    /// `u_inv · P · v_inv = s`.
    pub u_inv: PolyGrid,
    pub v_inv: PolyGrid,
    pub rank: usize,
}

impl SmithResult {
    /// Monic invariant factors `s_1 | s_2 | … | s_r`.
    pub fn invariant_factors(&self) -> Vec<Poly> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

struct Tracked {
    s: PolyGrid,
    left: PolyGrid,
    left_inv: PolyGrid,
    right: PolyGrid,
    right_inv: PolyGrid,
}

impl Tracked {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.s.swap_rows(i, j);
        self.left_inv.swap_rows(i, j);
        self.left.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.s.swap_cols(i, j);
        self.right_inv.swap_cols(i, j);
        self.right.swap_rows(i, j);
    }

    /// `row_i += c · row_j`.
    fn add_row(&mut self, i: usize, j: usize, c: &Poly) {
        self.s.add_row(i, j, c);
        self.left_inv.add_row(i, j, c);
        self.left.add_col(j, i, &c.neg());
    }

    /// `col_j += col_i · c`.
    fn add_col(&mut self, j: usize, i: usize, c: &Poly) {
        self.s.add_col(j, i, c);
        self.right_inv.add_col(j, i, c);
        self.right.add_row(i, j, &c.neg());
    }

    fn scale_row(&mut self, i: usize, c: &Rational) {
        self.s.scale_row(i, c);
        self.left_inv.scale_row(i, c);
        self.left.scale_col(i, &c.recip());
    }
}

/// Computes `P = U S V` with `S` diagonal, monic invariant factors forming
/// a divisibility chain, and unimodular `U`, `V`.
pub fn smith_form(p: &PolyGrid) -> SmithResult {
    let (m, n) = p.shape();
    let mut w = Tracked {
        s: p.clone(),
        left: PolyGrid::identity(m),
        left_inv: PolyGrid::identity(m),
        right: PolyGrid::identity(n),
        right_inv: PolyGrid::identity(n),
    };
    let mut rank = 0;
    for t in 0..m.min(n) {
        loop {
            let best = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !w.s[(i, j)].is_zero())
                .min_by_key(|&(i, j)| w.s[(i, j)].degree());
            let Some((bi, bj)) = best else { break };
            w.swap_rows(t, bi);
            w.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..m {
                if !w.s[(i, t)].is_zero() {
                    let (q, r) = w.s[(i, t)].div_rem(&w.s[(t, t)]);
                    w.add_row(i, t, &q.neg());
                    clean &= r.is_zero();
                }
            }
            for j in t + 1..n {
                if !w.s[(t, j)].is_zero() {
                    let (q, r) = w.s[(t, j)].div_rem(&w.s[(t, t)]);
                    w.add_col(j, t, &q.neg());
                    clean &= r.is_zero();
                }
            }
            if !clean {
                continue;
            }
            // Pivot isolated; enforce that it divides the trailing block.
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !w.s[(t, t)].divides(&w.s[(i, j)]));
            match bad {
                Some((i, _)) => w.add_row(t, i, &Poly::one()),
                None => break,
            }
        }
        if w.s[(t, t)].is_zero() {
            break;
        }
        let lead = w.s[(t, t)].lead().expect("nonzero pivot").recip();
        w.scale_row(t, &lead);
        rank += 1;
    }
    SmithResult {
        u: w.left,
        s: w.s,
        v: w.right,
        u_inv: w.left_inv,
        v_inv: w.right_inv,
        rank,
    }
}

/// Column compression `P V = [Q 0]` with `Q` of full column rank
/// `r = rank P` and `V` unimodular, read off the Smith witnesses.
pub fn column_compress(p: &PolyGrid) -> (PolyGrid, PolyGrid) {
    let res = smith_form(p);
    let pv = p.mul(&res.v_inv).expect("shapes agree");
    (pv.col_slice(0, res.rank), res.v_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::grid::is_unimodular;

    fn g(rows: &[Vec<Vec<i64>>]) -> PolyGrid {
        PolyGrid::from_int_rows(rows)
    }

    fn check(p: &PolyGrid, res: &SmithResult) {
        assert_eq!(res.u.mul(&res.s).unwrap().mul(&res.v).unwrap(), *p);
        assert_eq!(res.u_inv.mul(p).unwrap().mul(&res.v_inv).unwrap(), res.s);
        assert!(is_unimodular(&res.u).unwrap());
        assert!(is_unimodular(&res.v).unwrap());
        let f = res.invariant_factors();
        assert!(f.iter().all(Poly::is_monic));
        assert!(f.windows(2).all(|w| w[0].divides(&w[1])));
    }

    #[test]
    fn constant_invertible() {
        let p = g(&[vec![vec![2], vec![1]], vec![vec![1], vec![1]]]);
        let res = smith_form(&p);
        check(&p, &res);
        assert_eq!(res.s, PolyGrid::identity(2));
    }

    #[test]
    fn divisibility_already_holds() {
        let p = g(&[vec![vec![0, 1], vec![]], vec![vec![], vec![0, -1, 1]]]);
        let res = smith_form(&p);
        check(&p, &res);
        assert_eq!(res.s, p);
    }

    #[test]
    fn jordan_block() {
        // gcd of entries of [[λ, 1], [0, λ]] is 1 and its determinant is λ².
        let p = g(&[vec![vec![0, 1], vec![1]], vec![vec![], vec![0, 1]]]);
        let res = smith_form(&p);
        check(&p, &res);
        assert_eq!(res.invariant_factors(), vec![Poly::one(), Poly::from_ints(&[0, 0, 1])]);
    }

    #[test]
    fn coprime_diagonal_needs_fix_up() {
        // diag(λ, λ+1): gcd 1, det λ(λ+1).
        let p = g(&[vec![vec![0, 1], vec![]], vec![vec![], vec![1, 1]]]);
        let res = smith_form(&p);
        check(&p, &res);
        assert_eq!(res.invariant_factors(), vec![Poly::one(), Poly::from_ints(&[0, 1, 1])]);
    }

    #[test]
    fn compress_duplicate_column() {
        let p = g(&[vec![vec![0, 1], vec![0, 1]]]);
        let (q, v) = column_compress(&p);
        assert_eq!(q.shape(), (1, 1));
        assert!(is_unimodular(&v).unwrap());
        let pv = p.mul(&v).unwrap();
        assert_eq!(pv.col_slice(0, 1), q);
        assert!(pv.col_slice(1, 2).is_zero());
        assert_eq!(q.normal_rank(), 1);
    }
}
