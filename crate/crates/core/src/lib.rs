//! Transpose-free CG-like Krylov solvers for nonsymmetric ill-posed linear
//! systems.
//!
//! After `m` Arnoldi steps `A W_m = W_{m+1} H_m`, the rank-`m` matrix
//! `A'_m = W_m H_mᵀ W_{m+1}ᵀ` stands in for `Aᵀ`. The product `A A'_m` is
//! symmetric positive semidefinite and equals `W_{m+1} H_m H_mᵀ W_{m+1}ᵀ`, so
//! MINRES or CG applied to the small projected system `H_m H_mᵀ t = ‖b‖ e₁`
//! yields regularized solutions `x = W_m H_mᵀ t` without ever touching `Aᵀ`.
//! MINRES gives TF-CGLS and CG gives TF-CGNE.
//!
//! The crate is `no_std` and needs only `alloc`. It also carries the reference
//! solvers (GMRES, CGLS, CGNE, TSVD), the classic 1-D test problems and
//! spatially invariant blur operators used to compare them.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arnoldi;
pub mod deblur;
pub mod error;
pub mod krylov;
pub mod linalg;
pub mod problems;
pub mod tfcg;

pub use arnoldi::{arnoldi_expand, ArnoldiDecomposition, ArnoldiOptions, ArnoldiVariant};
pub use error::{Error, Result};
pub use linalg::{
    dense_svd, matrix_norm2, norm2, tsvd_solve, AdjointKind, DenseMatrix, LinearOperator,
    SvdFactorization,
};
