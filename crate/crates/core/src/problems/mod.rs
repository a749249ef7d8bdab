//! Dense 1-D ill-posed test problems and the Gaussian noise model.
//!
//! The discretizations reproduce the classic Regularization Tools
//! constructions; their nonsymmetry ratios `‖A − Aᵀ‖/‖A‖` are checked against
//! published values in the tests.

mod baart;
mod heat;
mod laplace;
mod noise;

pub use baart::baart;
pub use heat::{heat, HEAT_RANK_THRESHOLD};
pub use laplace::{gauss_laguerre, i_laplace, LaplaceExample};
pub use noise::{add_noise, NoiseRng};

use alloc::vec::Vec;

use crate::error::Result;
use crate::linalg::{matrix_norm2, DenseMatrix};

/// A discretized operator together with its exact solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    pub a: DenseMatrix,
    pub x_exact: Vec<f64>,
    /// `A · x_exact`.
    pub b_exact: Vec<f64>,
    /// Right-hand side sampled from the continuous data, when known in closed
    /// form.
    pub rhs_analytic: Option<Vec<f64>>,
}

impl Discretization {
    pub(crate) fn from_matrix(a: DenseMatrix, x_exact: Vec<f64>) -> Self {
        let b_exact = a.matvec(&x_exact);
        Self { a, x_exact, b_exact, rhs_analytic: None }
    }
}

/// `‖A − Aᵀ‖ / ‖A‖` in the spectral norm.
pub fn asymmetry_ratio(a: &DenseMatrix) -> Result<f64> {
    Ok(matrix_norm2(&a.sub(&a.transpose()))? / matrix_norm2(a)?)
}

/// A test problem with noisy data `b = b_exact + noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestProblem {
    pub a: DenseMatrix,
    pub x_exact: Vec<f64>,
    pub b_exact: Vec<f64>,
    pub b: Vec<f64>,
    pub noise: Vec<f64>,
    pub eps_hat: f64,
    pub seed: u64,
}

impl TestProblem {
    pub fn new(disc: Discretization, eps_hat: f64, seed: u64) -> Result<Self> {
        let (b, noise) = add_noise(&disc.b_exact, eps_hat, seed)?;
        Ok(Self {
            a: disc.a,
            x_exact: disc.x_exact,
            b_exact: disc.b_exact,
            b,
            noise,
            eps_hat,
            seed,
        })
    }
}
