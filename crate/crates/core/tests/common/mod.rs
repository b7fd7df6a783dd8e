//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use faer::Mat;
use gcrd_core::exact::{Poly, PolyGrid};
use gcrd_core::pencil::Pencil;
use gcrd_core::polymat::{Matrix, PolyMatrix};
use gcrd_core::scalar::{c64, rational, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small random rational: numerator in `-4..=4`, denominator in `1..=3`.
pub fn small_rational(r: &mut ChaCha8Rng) -> Rational {
    rational(r.random_range(-4..=4), r.random_range(1..=3))
}

/// Random polynomial of degree at most `deg`, zero with probability `zero_p`.
pub fn random_poly(r: &mut ChaCha8Rng, deg: usize, zero_p: f64) -> Poly {
    if r.random_bool(zero_p) {
        return Poly::zero();
    }
    let d = r.random_range(0..=deg);
    Poly::new((0..=d).map(|_| small_rational(r)).collect())
}

pub fn random_grid(r: &mut ChaCha8Rng, rows: usize, cols: usize, deg: usize) -> PolyGrid {
    PolyGrid::from_fn(rows, cols, |_, _| random_poly(r, deg, 0.2))
}

/// Random grid, with probability one half made rank deficient by replacing
/// a row with a polynomial combination of two others.
pub fn random_grid_maybe_deficient(r: &mut ChaCha8Rng, rows: usize, cols: usize, deg: usize) -> PolyGrid {
    let mut g = random_grid(r, rows, cols, deg);
    if rows >= 2 && r.random_bool(0.5) {
        let (a, b) = (r.random_range(0..rows), r.random_range(0..rows));
        let target = (a + 1) % rows;
        let (ca, cb) = (random_poly(r, 1, 0.0), random_poly(r, 1, 0.3));
        for j in 0..cols {
            let v = g[(a, j)].mul(&ca).add(&g[(b, j)].mul(&cb));
            g[(target, j)] = if target == b { g[(a, j)].mul(&ca) } else { v };
        }
    }
    g
}

/// Random unimodular `n × n`: a product of unit triangular factors with
/// polynomial off-diagonal entries, nonzero constant diagonal scalings and
/// a permutation.
pub fn random_unimodular(r: &mut ChaCha8Rng, n: usize, deg: usize) -> PolyGrid {
    let mut lower = PolyGrid::identity(n);
    let mut upper = PolyGrid::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i > j {
                lower[(i, j)] = random_poly(r, deg, 0.4);
            } else if i < j {
                upper[(i, j)] = random_poly(r, deg, 0.4);
            } else {
                let mut c = small_rational(r);
                while c.is_zero() {
                    c = small_rational(r);
                }
                upper[(i, i)] = Poly::constant(c);
            }
        }
    }
    let mut perm = PolyGrid::identity(n);
    if n >= 2 {
        let (a, b) = (r.random_range(0..n), r.random_range(0..n));
        perm.swap_rows(a, b);
    }
    perm.mul(&lower).unwrap().mul(&upper).unwrap()
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(g: &PolyGrid) -> Poly {
    let n = g.rows();
    assert_eq!(n, g.cols());
    if n == 0 {
        return Poly::one();
    }
    if n == 1 {
        return g[(0, 0)].clone();
    }
    let mut acc = Poly::zero();
    for j in 0..n {
        if g[(0, j)].is_zero() {
            continue;
        }
        let minor = PolyGrid::from_fn(n - 1, n - 1, |a, b| g[(a + 1, if b < j { b } else { b + 1 })].clone());
        let term = g[(0, j)].mul(&cofactor_det(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Monic gcd by the Euclidean algorithm; zero when both are zero.
pub fn euclid_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, rem) = x.div_rem(&y);
        x = y;
        y = rem;
    }
    match x.lead() {
        None => x,
        Some(l) => x.scale(&(Rational::one() / l.clone())),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Monic gcd of all `k × k` minors.
pub fn minor_gcd(g: &PolyGrid, k: usize) -> Poly {
    let mut acc = Poly::zero();
    for rows in subsets(g.rows(), k) {
        for cols in subsets(g.cols(), k) {
            let sub = PolyGrid::from_fn(k, k, |a, b| g[(rows[a], cols[b])].clone());
            acc = euclid_gcd(&acc, &cofactor_det(&sub));
        }
    }
    acc
}

/// Rank over ℚ(λ) as the largest `k` with a nonzero `k × k` minor.
pub fn minor_rank(g: &PolyGrid) -> usize {
    (1..=g.rows().min(g.cols()))
        .rev()
        .find(|&k| !minor_gcd(g, k).is_zero())
        .unwrap_or(0)
}

pub fn gaussian(r: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(r)
}

pub fn complex_gaussian(r: &mut ChaCha8Rng) -> c64 {
    c64::new(gaussian(r), gaussian(r))
}

pub fn random_mat(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat<c64> {
    Mat::from_fn(rows, cols, |_, _| complex_gaussian(r))
}

pub fn random_unitary_mat(r: &mut ChaCha8Rng, n: usize) -> Mat<c64> {
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    random_mat(r, n, n).qr().compute_Q()
}

/// A pencil in Kronecker form with the given blocks, hidden behind random
/// unitary transformations. Returns the pencil and its finite eigenvalues.
pub struct PlantedPencil {
    pub pencil: Pencil,
    pub eigenvalues: Vec<c64>,
    /// Right Kronecker indices `ε` (blocks `ε × (ε+1)`).
    pub right: Vec<usize>,
    /// Left Kronecker indices `η` (blocks `(η+1) × η`).
    pub left: Vec<usize>,
    /// Sizes of the infinite Jordan blocks.
    pub infinite: Vec<usize>,
}

pub fn planted_pencil(
    r: &mut ChaCha8Rng,
    eigenvalues: &[c64],
    right: &[usize],
    left: &[usize],
    infinite: &[usize],
) -> PlantedPencil {
    let rows = eigenvalues.len() + right.iter().sum::<usize>() + left.iter().map(|h| h + 1).sum::<usize>()
        + infinite.iter().sum::<usize>();
    let cols = eigenvalues.len() + right.iter().map(|e| e + 1).sum::<usize>() + left.iter().sum::<usize>()
        + infinite.iter().sum::<usize>();
    let mut a = Mat::<c64>::zeros(rows, cols);
    let mut e = Mat::<c64>::zeros(rows, cols);
    let one = c64::new(1.0, 0.0);
    let (mut i0, mut j0) = (0, 0);
    // Upper triangular regular part with the planted diagonal.
    let k = eigenvalues.len();
    for i in 0..k {
        a[(i, i)] = eigenvalues[i];
        e[(i, i)] = one;
        for j in i + 1..k {
            a[(i, j)] = complex_gaussian(r) * 0.3;
        }
    }
    i0 += k;
    j0 += k;
    // L_ε: λ [I 0] − [0 I], so A = [0 I], E = [I 0].
    for &eps in right {
        for t in 0..eps {
            e[(i0 + t, j0 + t)] = one;
            a[(i0 + t, j0 + t + 1)] = one;
        }
        i0 += eps;
        j0 += eps + 1;
    }
    // L_η^T.
    for &eta in left {
        for t in 0..eta {
            e[(i0 + t, j0 + t)] = one;
            a[(i0 + t + 1, j0 + t)] = one;
        }
        i0 += eta + 1;
        j0 += eta;
    }
    // N_k: A = I, E = nilpotent shift.
    for &s in infinite {
        for t in 0..s {
            a[(i0 + t, j0 + t)] = one;
            if t + 1 < s {
                e[(i0 + t, j0 + t + 1)] = one;
            }
        }
        i0 += s;
        j0 += s;
    }
    let u = random_unitary_mat(r, rows);
    let v = random_unitary_mat(r, cols);
    let pencil = Pencil::new(&u * &a * &v, &u * &e * &v).unwrap();
    PlantedPencil {
        pencil,
        eigenvalues: eigenvalues.to_vec(),
        right: right.to_vec(),
        left: left.to_vec(),
        infinite: infinite.to_vec(),
    }
}

/// Random real polynomial matrix with integer coefficients in `-3..=3`.
pub fn int_poly_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, deg: usize) -> PolyMatrix<Rational> {
    let coeffs = (0..=deg)
        .map(|_| Matrix::from_fn(rows, cols, |_, _| Rational::from_integer(r.random_range(-3i64..=3).into())))
        .collect();
    PolyMatrix::new(rows, cols, coeffs).unwrap()
}

/// Greedy matching of two multisets of complex numbers; the largest
/// relative distance `|a − b| / max(1, |b|)`.
pub fn match_eigenvalues(found: &[c64], want: &[c64]) -> f64 {
    if found.len() != want.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; found.len()];
    let mut worst: f64 = 0.0;
    for w in want {
        let (idx, d) = found
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, f)| (i, (f - w).norm() / w.norm().max(1.0)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}
