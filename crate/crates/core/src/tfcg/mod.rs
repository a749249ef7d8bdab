//! Transpose-free CG-type solvers.
//!
//! A first cycle of Arnoldi steps builds `A W_m = W_{m+1} H_m`, and the
//! factored matrix `A′_m = W_m H_mᵀ W_{m+1}ᵀ` stands in for `Aᵀ`. The second
//! cycle runs MINRES (TF-CGLS) or CG (TF-CGNE) on the small system
//! `H_m H_mᵀ t = ‖b‖ e₁` and maps back through `x = W_m H_mᵀ t`.

mod config;
mod diagnostics;
mod solve;
mod stopping;
mod surrogate;

pub use config::{FirstStop, InnerSolver, TfConfig, FIRST_CYCLE_BREAKDOWN_TOL};
pub use diagnostics::{
    filter_factors, svd_mixing_report, verify_projected_equivalence, zeta_diagnostics, FilterKind,
    MixingReport, ProjectedEquivalence,
};
pub use solve::{recover_solution, tf_solve, FirstCycleEnd, TfResult, TfStep};
pub use stopping::{stop_sigma_product, stop_subdiag, StoppingDiagnostics};
pub use surrogate::TfPreconditioner;

pub use crate::krylov::discrepancy_check;
