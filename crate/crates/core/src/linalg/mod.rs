//! Dense matrices, vector kernels, the matrix-free operator abstraction and a
//! small one-sided Jacobi SVD.

mod dense;
mod operator;
mod svd;
pub mod vector;

pub use dense::DenseMatrix;
pub use operator::{
    apply, AdjointKind, Composed, Diagonal, Identity, LinearOperator, Transposed,
};
pub use svd::{dense_svd, matrix_norm2, singular_values, tsvd_solve, SvdFactorization};
pub use vector::norm2;
