//! Reproducible experiment drivers: a small textbook example, a
//! parametrized family with a known root polynomial, and planted random
//! factorizations `P = M S N` with `S = I ⊕ p(λ)`.

use std::time::Instant;

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gcrd::{extract_gcrd, gcrd_characteristic_poly, ExtractOptions, GcrdResult};
use crate::pencil::Tolerance;
use crate::polymat::{Matrix, PolyMatrix};
use crate::scalar::{c64, Rational};
use crate::verify::{condition_at, residual, root_poly_check, zero_conditioning};

/// Name of the pseudo-random generator behind every seeded experiment.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9, seed_from_u64)";

fn int_block(rows: &[[[i64; 2]; 4]]) -> PolyMatrix<Rational> {
    let coeffs = rows
        .iter()
        .map(|c| Matrix::from_fn(4, 2, |i, j| Rational::from_integer(c[i][j].into())))
        .collect();
    PolyMatrix::new(4, 2, coeffs).expect("consistent shapes")
}

/// The 4×2 cubic example, split into two 2×2 blocks.
pub fn bitmead_blocks() -> Vec<PolyMatrix<Rational>> {
    let p = int_block(&[
        [[1, 1], [1, 0], [5, 2], [-1, -1]],
        [[2, 0], [2, 2], [3, 4], [1, 1]],
        [[0, 1], [1, 1], [2, 0], [1, 1]],
        [[0, 0], [0, 0], [0, 1], [0, 0]],
    ]);
    vec![p.row_slice(0, 2), p.row_slice(2, 4)]
}

/// Monic determinant of the known divisor `[[5, 2], [1, 0]] + [[2, 3], [0, 1]] λ`,
/// ascending: `λ² + λ − 1`.
pub fn bitmead_charpoly() -> Vec<f64> {
    vec![-1.0, 1.0, 1.0]
}

#[derive(Clone, Debug, Serialize)]
pub struct BitmeadRow {
    pub rank: usize,
    #[serde(rename = "||N_r(:)||_2")]
    pub norm_n: f64,
    #[serde(rename = "||G_c(:)||_2")]
    pub norm_g: f64,
    #[serde(rename = "||Res(:)||_2")]
    pub residual: f64,
    pub charpoly_error: f64,
    pub seconds: f64,
}

/// Coefficient-wise distance between two ascending coefficient lists, the
/// shorter one padded with zeros.
pub fn coefficient_error(a: &[c64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or_default();
            let y = c64::new(b.get(i).copied().unwrap_or(0.0), 0.0);
            (x - y).norm()
        })
        .fold(0.0, f64::max)
}

pub fn run_bitmead(tol: Tolerance) -> Result<(BitmeadRow, GcrdResult)> {
    let start = Instant::now();
    let blocks: Vec<PolyMatrix<c64>> = bitmead_blocks().iter().map(PolyMatrix::to_c64).collect();
    let res = extract_gcrd(&blocks, &ExtractOptions { tol, ..ExtractOptions::default() })?;
    let cp = gcrd_characteristic_poly(&res.g_c)?;
    let row = BitmeadRow {
        rank: res.rank,
        norm_n: res.n_r.frob_norm(),
        norm_g: res.g_c.frob_norm(),
        residual: res.residual,
        charpoly_error: coefficient_error(&cp, &bitmead_charpoly()),
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok((row, res))
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> c64 {
    c64::new(gaussian(rng), gaussian(rng))
}

/// Unitary factor of the QR factorization of a seeded complex Gaussian
/// `n × n` matrix.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> Matrix<c64> {
    let x = Mat::<c64>::from_fn(n, n, |_, _| complex_gaussian(rng));
    Matrix::from_faer(x.qr().compute_Q().as_ref())
}

/// `Z [[λ², 2λ], [0, λ], [λ, kλ + 1], [0, λ²]]`.
pub fn param_k_input(k: f64, z: &Matrix<c64>) -> PolyMatrix<c64> {
    let c = |x: f64| c64::new(x, 0.0);
    let base = PolyMatrix::from_entries(4, 2, |i, j| match (i, j) {
        (0, 0) | (3, 1) => vec![c(0.0), c(0.0), c(1.0)],
        (0, 1) => vec![c(0.0), c(2.0)],
        (1, 1) | (2, 0) => vec![c(0.0), c(1.0)],
        (2, 1) => vec![c(1.0), c(k)],
        _ => vec![],
    });
    PolyMatrix::constant(z.clone()).mul(&base).expect("4x4 times 4x2")
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamKRow {
    pub log10_k: f64,
    pub rank: usize,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    pub rho4: f64,
}

/// One row per `k`, all with the same seeded unitary `Z`.
pub fn run_param_k(ks: &[f64], seed: u64, tol: Tolerance) -> Result<Vec<ParamKRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = random_unitary(4, &mut rng);
    ks.iter()
        .map(|&k| {
            let p = param_k_input(k, &z);
            let res = extract_gcrd(std::slice::from_ref(&p), &ExtractOptions { tol, ..ExtractOptions::default() })?;
            let (rho3, rho4) = root_poly_check(&res.g_c).unwrap_or((f64::NAN, f64::NAN));
            Ok(ParamKRow {
                log10_k: k.log10(),
                rank: res.rank,
                rho1: residual(&p, &res.n_r, &res.g_c)?,
                rho2: condition_at(&res.g_c, c64::new(1.0, 0.0))?,
                rho3,
                rho4,
            })
        })
        .collect()
}

/// Shape of a planted instance `P = M S N`.
#[derive(Clone, Copy, Debug)]
pub struct PlantedShape {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    /// Degree of `M` and of `N`.
    pub factor_degree: usize,
    /// Degree of the scalar `p`, i.e. the number of planted zeros.
    pub zeros: usize,
}

impl PlantedShape {
    /// 200×100, rank 10, degree 6, four zeros.
    pub const DESK_TABLE: Self = Self { m: 200, n: 100, r: 10, factor_degree: 1, zeros: 4 };
    /// 4×3, rank 2, degree 24, four zeros.
    pub const HIGH_DEGREE: Self = Self { m: 4, n: 3, r: 2, factor_degree: 10, zeros: 4 };

    pub fn degree(&self) -> usize {
        2 * self.factor_degree + self.zeros
    }
}

#[derive(Clone, Debug)]
pub struct Planted {
    /// `M S N`, scaled to unit Frobenius norm.
    pub p: PolyMatrix<c64>,
    /// Roots of `p`.
    pub zeros: Vec<c64>,
}

fn real_poly_matrix(rows: usize, cols: usize, degree: usize, rng: &mut ChaCha8Rng) -> PolyMatrix<c64> {
    let coeffs = (0..=degree)
        .map(|_| Matrix::from_fn(rows, cols, |_, _| c64::new(gaussian(rng), 0.0)))
        .collect();
    PolyMatrix::new(rows, cols, coeffs).expect("consistent shapes")
}

/// Roots of `Σ c_i λ^i` from the companion matrix.
pub fn poly_roots(c: &[f64]) -> Result<Vec<c64>> {
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg];
    if lead == 0.0 {
        return Err(Error::DegenerateDegree("leading coefficient is zero".into()));
    }
    let comp = Mat::<c64>::from_fn(deg, deg, |i, j| {
        if i == 0 {
            c64::new(-c[deg - 1 - j] / lead, 0.0)
        } else if i == j + 1 {
            c64::new(1.0, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    comp.eigenvalues()
        .map_err(|e| Error::Numerical(format!("companion eigenvalues: {e:?}")))
}

/// Draws `M` (`m × r`), `S = I_{r−1} ⊕ p(λ)` and `N` (`r × n`) with real
/// Gaussian coefficients and returns the normalized product and the roots
/// of `p`.
pub fn planted_instance(shape: PlantedShape, rng: &mut ChaCha8Rng) -> Result<Planted> {
    let PlantedShape { m, n, r, factor_degree, zeros } = shape;
    if r == 0 || r > m.min(n) {
        return Err(Error::InvalidRequest {
            rank: r,
            reason: format!("cannot plant rank {r} in a {m}x{n} matrix"),
        });
    }
    let mm = real_poly_matrix(m, r, factor_degree, rng);
    let pc: Vec<f64> = (0..=zeros).map(|_| gaussian(rng)).collect();
    let nn = real_poly_matrix(r, n, factor_degree, rng);
    let s = PolyMatrix::from_entries(r, r, |i, j| {
        if i != j {
            vec![]
        } else if i + 1 < r {
            vec![c64::new(1.0, 0.0)]
        } else {
            pc.iter().map(|&x| c64::new(x, 0.0)).collect()
        }
    });
    let p = mm.mul(&s)?.mul(&nn)?;
    Ok(Planted {
        p: p.normalize(),
        zeros: poly_roots(&pc)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub rank: usize,
    #[serde(rename = "||N_r(:)||_2")]
    pub norm_n: f64,
    #[serde(rename = "||G_c(:)||_2")]
    pub norm_g: f64,
    #[serde(rename = "||Res(:)||_2")]
    pub residual: f64,
    #[serde(rename = "kappa(G_c(l1))^-1")]
    pub kappa1: f64,
    #[serde(rename = "kappa(G_c(l2))^-1")]
    pub kappa2: f64,
    #[serde(rename = "kappa(G_c(l3))^-1")]
    pub kappa3: f64,
    #[serde(rename = "kappa(G_c(l4))^-1")]
    pub kappa4: f64,
    pub tol: f64,
}

impl TableRow {
    pub fn kappa_inv(&self) -> [f64; 4] {
        [self.kappa1, self.kappa2, self.kappa3, self.kappa4]
    }
}

fn table_row(inst: &Planted, tol: Tolerance) -> Result<TableRow> {
    let res = extract_gcrd(std::slice::from_ref(&inst.p), &ExtractOptions { tol, ..ExtractOptions::default() })?;
    let mut k = zero_conditioning(&res.g_c, &inst.zeros)?;
    k.resize(4, f64::NAN);
    Ok(TableRow {
        rank: res.rank,
        norm_n: res.n_r.frob_norm(),
        norm_g: res.g_c.frob_norm(),
        residual: res.residual,
        kappa1: k[0],
        kappa2: k[1],
        kappa3: k[2],
        kappa4: k[3],
        tol: tol.rel(),
    })
}

/// `count` seeded planted instances of `shape`, one row each.
pub fn run_random_table(shape: PlantedShape, count: usize, seed: u64, tol: Tolerance) -> Result<Vec<TableRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| table_row(&planted_instance(shape, &mut rng)?, tol))
        .collect()
}

/// The same `count` high-degree instances run at `tol` and at `10·tol`.
pub fn run_tolerance_sensitivity(
    count: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<(Vec<TableRow>, Vec<TableRow>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wide = Tolerance::new(10.0 * tol.rel())?;
    let mut base = Vec::with_capacity(count);
    let mut raised = Vec::with_capacity(count);
    for _ in 0..count {
        let inst = planted_instance(PlantedShape::HIGH_DEGREE, &mut rng)?;
        base.push(table_row(&inst, tol)?);
        raised.push(table_row(&inst, wide)?);
    }
    Ok((base, raised))
}

/// Serializes rows as CSV with a header line.
pub fn to_csv<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitmead_divisor() {
        let (row, res) = run_bitmead(Tolerance::default()).unwrap();
        assert_eq!(row.rank, 2);
        assert!(row.residual <= 1e-12, "{row:?}");
        assert!(row.charpoly_error <= 1e-12, "{row:?}");
        assert!((res.g_c.frob_norm() - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn roots_of_quadratic() {
        let mut r: Vec<f64> = poly_roots(&[-2.0, -1.0, 1.0]).unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn planted_zeros_are_zeros_of_the_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = PlantedShape { m: 5, n: 4, r: 2, factor_degree: 1, zeros: 2 };
        let inst = planted_instance(shape, &mut rng).unwrap();
        assert_eq!(inst.p.degree(), shape.degree());
        for z in &inst.zeros {
            let s = crate::pencil::linalg::singular_values(inst.p.eval(z).to_faer().as_ref()).unwrap();
            assert!(s[1] / s[0] < 1e-10, "{s:?}");
        }
    }

    #[test]
    fn csv_has_header() {
        let rows = vec![ParamKRow { log10_k: 1.0, rank: 2, rho1: 0.0, rho2: 1.0, rho3: 0.0, rho4: 0.0 }];
        let s = to_csv(&rows).unwrap();
        assert!(s.starts_with("log10_k,rank,rho1,rho2,rho3,rho4\n"));
    }
}
