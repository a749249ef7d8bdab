mod common;

use common::{dot, norm, to_na, TestRng};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use tfkrylov_core::linalg::{singular_values, Diagonal, Identity};
use tfkrylov_core::{dense_svd, matrix_norm2, norm2, tsvd_solve, DenseMatrix, Error, LinearOperator};

#[test]
fn apply_examples() {
    assert_eq!(Identity(3).apply(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    assert_eq!(Diagonal(vec![2.0, 0.0, -1.0]).apply(&[1.0; 3]).unwrap(), vec![2.0, 0.0, -1.0]);
    assert!(matches!(Identity(3).apply(&[1.0; 2]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn dense_apply_matches_triple_loop() {
    let mut rng = TestRng::new(1);
    let a = rng.matrix(5, 5);
    let x = rng.vector(5);
    let y = a.apply(&x).unwrap();
    for i in 0..5 {
        let mut s = 0.0;
        for j in 0..5 {
            s += a[(i, j)] * x[j];
        }
        assert!((y[i] - s).abs() < 1e-15);
    }
}

#[test]
fn adjoint_probes_for_exact_operators() {
    let mut rng = TestRng::new(2);
    let a = rng.matrix(7, 4);
    let scale = matrix_norm2(&a).unwrap();
    for _ in 0..20 {
        let x = rng.vector(4);
        let y = rng.vector(7);
        let lhs = dot(&a.apply(&x).unwrap(), &y);
        let rhs = dot(&x, &a.apply_adjoint(&y).unwrap());
        assert!((lhs - rhs).abs() <= 1e-12 * norm(&x) * norm(&y) * scale);
    }
}

#[test]
fn norms() {
    assert_eq!(norm2(&[3.0, 4.0]), 5.0);
    assert_eq!(norm2(&[0.0; 4]), 0.0);
    let d = DenseMatrix::from_rows(&[&[2.0, 0.0], &[0.0, -5.0]]);
    assert_eq!(matrix_norm2(&d).unwrap(), 5.0);
}

#[test]
fn squared_singular_values_are_gram_eigenvalues() {
    let mut rng = TestRng::new(3);
    let m = rng.matrix(6, 5);
    let sigma = singular_values(&m).unwrap();
    let g = to_na(&m).transpose() * to_na(&m);
    let mut eig: Vec<f64> = g.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for (s, e) in sigma.iter().zip(&eig) {
        assert!((s * s - e).abs() < 1e-9, "{s}² vs {e}");
    }
}

#[test]
fn tsvd_matches_pseudo_inverse_of_truncated_matrix() {
    let mut rng = TestRng::new(4);
    let a = rng.matrix(8, 8);
    let b = rng.vector(8);
    let x = tsvd_solve(&a, &b, 4).unwrap();
    // rank-4 truncation built from an independent SVD
    let svd = to_na(&a).svd(true, true);
    let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut s = svd.singular_values.clone();
    let mut order: Vec<usize> = (0..8).collect();
    order.sort_by(|&i, &j| s[j].partial_cmp(&s[i]).unwrap());
    for &i in &order[4..] {
        s[i] = 0.0;
    }
    let a4 = &u * DMatrix::from_diagonal(&s) * &v_t;
    let oracle = a4.pseudo_inverse(1e-12).unwrap() * DVector::from_column_slice(&b);
    for (xi, oi) in x.iter().zip(oracle.iter()) {
        assert!((xi - oi).abs() < 1e-9 * oracle.norm().max(1.0));
    }
}

#[test]
fn tsvd_examples() {
    let b = [1.0, -2.0, 0.5];
    assert_eq!(tsvd_solve(&DenseMatrix::identity(3), &b, 3).unwrap(), b.to_vec());
    let d = DenseMatrix::from_diagonal(&[2.0, 1e-8]);
    let x = tsvd_solve(&d, &[2.0, 1e-8], 1).unwrap();
    assert!((x[0] - 1.0).abs() < 1e-15 && x[1] == 0.0);
    assert!(matches!(
        tsvd_solve(&DenseMatrix::from_diagonal(&[1.0, 0.0]), &[1.0, 1.0], 2),
        Err(Error::RankDeficient { index: 2 })
    ));
}

#[test]
fn full_rank_tsvd_is_the_normal_equations_solution() {
    let mut rng = TestRng::new(5);
    let a = rng.well_conditioned(9);
    let b = rng.vector(9);
    let x = tsvd_solve(&a, &b, 9).unwrap();
    let na = to_na(&a);
    let normal = (na.transpose() * &na).lu().solve(&(na.transpose() * DVector::from_column_slice(&b))).unwrap();
    for (xi, oi) in x.iter().zip(normal.iter()) {
        assert!((xi - oi).abs() < 1e-8);
    }
}

fn matrix_strategy() -> impl Strategy<Value = DenseMatrix> {
    (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
        prop::collection::vec(-10.0f64..10.0, r * c)
            .prop_map(move |data| DenseMatrix::from_row_major(r, c, data).unwrap())
    })
}

proptest! {
    #[test]
    fn svd_invariants(m in matrix_strategy()) {
        let s = dense_svd(&m).unwrap();
        let k = m.rows().min(m.cols());
        prop_assert_eq!(s.sigma.len(), k);
        prop_assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.sigma.iter().all(|&x| x >= 0.0));
        let eye = DenseMatrix::identity(k);
        prop_assert!(s.u.transpose().matmul(&s.u).sub(&eye).max_abs() <= 1e-10);
        prop_assert!(s.v.transpose().matmul(&s.v).sub(&eye).max_abs() <= 1e-10);
        let s1 = s.sigma[0].max(f64::MIN_POSITIVE);
        prop_assert!(s.reconstruct().sub(&m).max_abs() <= 1e-10 * s1);
    }

    #[test]
    fn svd_is_deterministic(m in matrix_strategy()) {
        prop_assert_eq!(dense_svd(&m).unwrap(), dense_svd(&m).unwrap());
    }

    #[test]
    fn finite_inputs_give_finite_outputs(m in matrix_strategy()) {
        let x = vec![1.0; m.cols()];
        prop_assert!(m.apply(&x).unwrap().iter().all(|v| v.is_finite()));
        prop_assert!(m.apply_adjoint(&vec![1.0; m.rows()]).unwrap().iter().all(|v| v.is_finite()));
    }
}
