use alloc::vec::Vec;
use core::f64::consts::PI;
use libm::{exp, pow, sqrt};

use super::Discretization;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Relative threshold `σᵢ > HEAT_RANK_THRESHOLD · σ₁` that defines the
/// numerical rank quoted for `heat(200)`.
pub const HEAT_RANK_THRESHOLD: f64 = 1e-10;

/// Inverse heat equation as a first-kind Volterra equation with
/// `κ = 1`, discretized by the midpoint rule: a lower-triangular Toeplitz
/// matrix.
pub fn heat(n: usize) -> Result<Discretization> {
    if n < 10 || n % 2 != 0 {
        return Err(Error::InvalidArgument("heat needs an even n >= 10"));
    }
    let kappa = 1.0;
    let h = 1.0 / n as f64;
    let c = h / (2.0 * kappa * sqrt(PI));
    let d = 1.0 / (4.0 * kappa * kappa);
    let k: Vec<f64> = (0..n)
        .map(|i| {
            let t = h / 2.0 + i as f64 * h;
            c * pow(t, -1.5) * exp(-d / t)
        })
        .collect();
    let a = DenseMatrix::from_fn(n, n, |i, j| if i >= j { k[i - j] } else { 0.0 });
    let x: Vec<f64> = (1..=n)
        .map(|i| {
            if i > n / 2 {
                return 0.0;
            }
            let ti = i as f64 * 20.0 / n as f64;
            if ti < 2.0 {
                0.75 * ti * ti / 4.0
            } else if ti < 3.0 {
                0.75 + (ti - 2.0) * (3.0 - ti)
            } else {
                0.75 * exp(-(ti - 3.0) * 2.0)
            }
        })
        .collect();
    Ok(Discretization::from_matrix(a, x))
}
