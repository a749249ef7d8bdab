use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use libm::{cos, exp, sqrt};

use super::Discretization;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// First-kind Fredholm equation with kernel `exp(s cos t)` on
/// `s ∈ [0, π/2]`, `t ∈ [0, π]`, solution `sin t`, discretized by a Galerkin
/// method with Simpson-rule column integrals.
pub fn baart(n: usize) -> Result<Discretization> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidArgument("baart needs an even n >= 4"));
    }
    let hs = PI / (2.0 * n as f64);
    let ht = PI / n as f64;
    let c = 1.0 / (3.0 * sqrt(2.0));
    let ihs: Vec<f64> = (0..=n).map(|i| i as f64 * hs).collect();
    let nh = n / 2;
    let cell = |co: f64| -> Vec<f64> {
        (0..n).map(|i| (exp(ihs[i + 1] * co) - exp(ihs[i] * co)) / co).collect()
    };
    let mut a = DenseMatrix::zeros(n, n);
    let mut f3: Vec<f64> = (0..n).map(|i| exp(ihs[i + 1]) - exp(ihs[i])).collect();
    for j in 1..=n {
        let f1 = f3.clone();
        let co2 = cos((j as f64 - 0.5) * ht);
        let co3 = cos(j as f64 * ht);
        let f2 = cell(co2);
        f3 = if j == nh { vec![hs; n] } else { cell(co3) };
        for i in 0..n {
            a[(i, j - 1)] = c * (f1[i] + 4.0 * f2[i] + f3[i]);
        }
    }
    let x: Vec<f64> = (0..n)
        .map(|i| -(cos((i + 1) as f64 * ht) - cos(i as f64 * ht)) / sqrt(ht))
        .collect();
    Ok(Discretization::from_matrix(a, x))
}
