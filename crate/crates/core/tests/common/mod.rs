#![allow(dead_code)]

use nalgebra::DMatrix;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfkrylov_core::DenseMatrix;

pub struct TestRng(ChaCha8Rng);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_7e57))
    }

    /// Uniform on [-1, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    pub fn vector(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.uniform()).collect()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, |_, _| self.uniform())
    }

    /// Random matrix shifted towards the identity, comfortably nonsingular.
    pub fn well_conditioned(&mut self, n: usize) -> DenseMatrix {
        let s = 0.5 / (n as f64).sqrt();
        DenseMatrix::from_fn(n, n, |i, j| s * self.uniform() + if i == j { 2.0 } else { 0.0 })
    }
}

pub fn to_na(a: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

pub fn na_norm2(a: &DMatrix<f64>) -> f64 {
    a.clone().svd(false, false).singular_values.max()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn diff_norm(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// `‖x − Q Qᵀ x‖` for `Q` with orthonormal columns.
pub fn off_span(q: &DMatrix<f64>, x: &[f64]) -> f64 {
    let xv = nalgebra::DVector::from_column_slice(x);
    (&xv - q * (q.transpose() * &xv)).norm()
}

/// Orthonormal basis of the column span, by thin QR.
pub fn orthonormal(cols: &DMatrix<f64>) -> DMatrix<f64> {
    cols.clone().qr().q()
}
