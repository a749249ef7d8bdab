use crate::arnoldi::ArnoldiOptions;
use crate::error::{Error, Result};

/// Default breakdown threshold of the first cycle, relative to `‖b‖`. The
/// stopping rules look at subdiagonals and singular values down at the
/// rounding level, so only an exactly invariant subspace should end the
/// expansion early.
pub const FIRST_CYCLE_BREAKDOWN_TOL: f64 = 1e-20;

/// Solver for the projected system `H_m H_mᵀ t = ‖b‖ e₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InnerSolver {
    /// MINRES, giving TF-CGLS.
    Minres,
    /// CG, giving TF-CGNE.
    Cg,
}

/// Rule that ends the first (Arnoldi) cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FirstStop {
    /// `h_{m+1,m} < τ`.
    Subdiag,
    /// `σ₁(H_m) · σ_min(H_{m+1}) < τ′`.
    SigmaProduct,
    /// Whichever of the two fires first.
    Both,
    /// Exactly this many steps (fewer on breakdown).
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfConfig {
    pub m_max: usize,
    /// Cap on second-cycle iterations; `None` means `m`.
    pub k_max: Option<usize>,
    pub tau: f64,
    pub tau_prime: f64,
    /// Safety factor of the discrepancy principle, `> 1`.
    pub eta: f64,
    /// Noise level `‖e‖/‖b_exact‖`; without it the discrepancy principle is off.
    pub eps_hat: Option<f64>,
    pub inner: InnerSolver,
    pub first_stop: FirstStop,
    pub arnoldi: ArnoldiOptions,
    /// Start the Arnoldi process from `A b` instead of `b`.
    pub range_restricted: bool,
}

impl Default for TfConfig {
    fn default() -> Self {
        Self {
            m_max: 40,
            k_max: None,
            tau: 1e-10,
            tau_prime: 1e-15,
            eta: 1.01,
            eps_hat: None,
            inner: InnerSolver::Minres,
            first_stop: FirstStop::SigmaProduct,
            arnoldi: ArnoldiOptions { breakdown_tol: FIRST_CYCLE_BREAKDOWN_TOL, ..ArnoldiOptions::default() },
            range_restricted: false,
        }
    }
}

impl TfConfig {
    pub fn tf_cgls() -> Self {
        Self::default()
    }

    pub fn tf_cgne() -> Self {
        Self { inner: InnerSolver::Cg, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_max == 0 {
            return Err(Error::InvalidArgument("m_max must be at least 1"));
        }
        if !(self.eta > 1.0) {
            return Err(Error::InvalidArgument("eta must exceed 1"));
        }
        if !(self.tau > 0.0) || !(self.tau_prime > 0.0) {
            return Err(Error::InvalidArgument("tau and tau_prime must be positive"));
        }
        if let Some(e) = self.eps_hat {
            if !(e >= 0.0) || !e.is_finite() {
                return Err(Error::InvalidArgument("eps_hat must be a finite nonnegative number"));
            }
        }
        if self.first_stop == FirstStop::Fixed(0) || self.k_max == Some(0) {
            return Err(Error::InvalidArgument("step counts must be at least 1"));
        }
        Ok(())
    }
}
