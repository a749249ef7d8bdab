use alloc::vec::Vec;

use crate::arnoldi::ArnoldiDecomposition;
use crate::error::Result;
use crate::linalg::singular_values;

/// Per-step quantities of the first cycle. Entry `m − 1` of each sequence
/// belongs to step `m`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StoppingDiagnostics {
    /// `h_{m+1,m}`.
    pub subdiagonals: Vec<f64>,
    /// `σ₁(H_m)`.
    pub sigma1_per_m: Vec<f64>,
    /// `σ_m(H_m)`, the smallest singular value.
    pub sigma_min_per_m: Vec<f64>,
    /// `σ₁(H_m) · σ_{m+1}(H_{m+1})`; one entry shorter than the others.
    pub sigma_product: Vec<f64>,
    /// `‖(I − P_m) AᵀA‖`.
    pub zeta_exact: Option<Vec<f64>>,
    /// `σ₁(H_m) · ‖A − W_{m+1} H_m W_mᵀ‖`.
    pub zeta_bound: Option<Vec<f64>>,
}

impl StoppingDiagnostics {
    /// Diagnostics for every step of `dec`.
    pub fn from_decomposition(dec: &ArnoldiDecomposition) -> Result<Self> {
        let mut d = Self::default();
        d.observe(dec)?;
        Ok(d)
    }

    /// Number of steps covered.
    pub fn steps(&self) -> usize {
        self.subdiagonals.len()
    }

    /// Appends the steps of `dec` not seen yet.
    pub fn observe(&mut self, dec: &ArnoldiDecomposition) -> Result<()> {
        for j in self.steps() + 1..=dec.steps() {
            self.subdiagonals.push(dec.subdiagonal(j)?);
            let sv = singular_values(&dec.hessenberg_at(j))?;
            self.sigma1_per_m.push(sv[0]);
            self.sigma_min_per_m.push(sv[j - 1]);
            if j >= 2 {
                self.sigma_product.push(self.sigma1_per_m[j - 2] * sv[j - 1]);
            }
        }
        Ok(())
    }
}

/// Smallest `m` with `h_{m+1,m} < τ`.
pub fn stop_subdiag(diag: &StoppingDiagnostics, tau: f64) -> Option<usize> {
    diag.subdiagonals.iter().position(|&h| h < tau).map(|i| i + 1)
}

/// Smallest `m` with `σ₁(H_m) σ_{m+1}(H_{m+1}) < τ′`.
pub fn stop_sigma_product(diag: &StoppingDiagnostics, tau_prime: f64) -> Option<usize> {
    diag.sigma_product.iter().position(|&p| p < tau_prime).map(|i| i + 1)
}
