mod common;

use common::*;
use faer::Mat;
use gcrd_core::experiments::{planted_instance, PlantedShape};
use gcrd_core::gcrd::{extract_gcrd, ExtractOptions};
use gcrd_core::pencil::{staircase, Pencil, Tolerance};
use gcrd_core::polymat::{Matrix, PolyMatrix};
use gcrd_core::scalar::c64;
use gcrd_core::verify::{root_poly_check, zero_conditioning};
use proptest::prelude::*;

fn defect(q: &Mat<c64>) -> f64 {
    let n = q.ncols();
    let qh = Mat::from_fn(n, q.nrows(), |i, j| q[(j, i)].conj());
    (&qh * q - Mat::<c64>::identity(n, n)).norm_l2()
}

/// Stacked coefficient rows `[G_0 G_1 … G_d]` have orthonormal rows.
fn stacked_gram_defect(g: &PolyMatrix<c64>) -> f64 {
    let r = g.rows();
    let mut gram = Mat::<c64>::zeros(r, r);
    for c in g.coeffs() {
        let m = c.to_faer();
        let mh = Mat::from_fn(m.ncols(), r, |i, j| m[(j, i)].conj());
        gram += &m * &mh;
    }
    (gram - Mat::<c64>::identity(r, r)).norm_l2()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(32) })]

    #[test]
    fn staircase_is_unitary_and_conserves_size(seed in any::<u64>(), p in 1usize..=12, q in 1usize..=12, stage2 in any::<bool>()) {
        let mut r = rng(seed);
        let pen = Pencil::new(random_mat(&mut r, p, q), random_mat(&mut r, p, q)).unwrap();
        let st = staircase(&pen, Tolerance::default(), stage2).unwrap();
        prop_assert!(defect(&st.q) <= 1e-13);
        prop_assert!(defect(&st.z) <= 1e-13);
        prop_assert!(st.structure_residual(&pen) <= 10.0 * st.tau_abs);
        prop_assert!(st.backward_error(&pen) <= 10.0 * st.tau_abs);
        let (lr, lc) = st.leading();
        let (zr, zc) = st.part3();
        prop_assert_eq!((lr + zr, lc + zc), (p, q));
        if let Some((kr, kc)) = st.part1() {
            let k = st.regular_size().unwrap();
            prop_assert_eq!((kr + k, kc + k), (lr, lc));
        }
    }

    #[test]
    fn divisor_has_orthonormal_stacked_rows(seed in any::<u64>(), r in 1usize..=2, deg in 0usize..=2) {
        let shape = PlantedShape { m: 4, n: 3, r, factor_degree: deg, zeros: 2 };
        let inst = planted_instance(shape, &mut rng(seed)).unwrap();
        let res = extract_gcrd(std::slice::from_ref(&inst.p), &ExtractOptions::default()).unwrap();
        prop_assert!((res.g_c.frob_norm() - (res.rank as f64).sqrt()).abs() <= 1e-10);
        prop_assert!(stacked_gram_defect(&res.g_c) <= 1e-10);
        prop_assert!(res.residual <= 100.0 * res.tau_abs * res.input_norm.max(1.0));
    }

    #[test]
    fn zero_conditioning_ignores_unitary_left_factor(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = PolyMatrix::new(2, 3, (0..3).map(|_| Matrix::from_faer(random_mat(&mut r, 2, 3).as_ref())).collect()).unwrap();
        let u = PolyMatrix::constant(Matrix::from_faer(random_unitary_mat(&mut r, 2).as_ref()));
        let ug = u.mul(&g).unwrap();
        let zeros: Vec<c64> = (0..3).map(|_| complex_gaussian(&mut r)).collect();
        let a = zero_conditioning(&g, &zeros).unwrap();
        let b = zero_conditioning(&ug, &zeros).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10 * x.max(1e-300));
        }
    }

    #[test]
    fn root_residuals_scale_with_the_divisor(seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let mut r = rng(seed);
        let g = PolyMatrix::new(2, 2, (0..2).map(|_| Matrix::from_faer(random_mat(&mut r, 2, 2).as_ref())).collect()).unwrap();
        let c = c64::new(re, im);
        let (r3, r4) = root_poly_check(&g).unwrap();
        let (s3, s4) = root_poly_check(&g.scale(&c)).unwrap();
        prop_assert!((s3 - c.norm() * r3).abs() <= 1e-12 * (1.0 + s3));
        prop_assert!((s4 - c.norm() * r4).abs() <= 1e-12 * (1.0 + s4));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    /// Any tolerance yields a result or an error, never a panic.
    #[test]
    fn extraction_never_panics(seed in any::<u64>(), m in 1usize..=4, n in 1usize..=4, d in 0usize..=3, lt in -15.0f64..-0.1) {
        let mut r = rng(seed);
        let p = PolyMatrix::new(m, n, (0..=d).map(|_| Matrix::from_faer(random_mat(&mut r, m, n).as_ref())).collect()).unwrap();
        let tol = Tolerance::new(10f64.powf(lt)).unwrap();
        let opts = ExtractOptions { tol, stage2: seed % 2 == 0, ..ExtractOptions::default() };
        if let Ok(res) = extract_gcrd(&[p], &opts) {
            prop_assert!(res.rank <= m.min(n));
        }
    }
}
