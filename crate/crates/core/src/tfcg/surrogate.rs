use alloc::vec;

use crate::arnoldi::ArnoldiDecomposition;
use crate::error::{Error, Result};
use crate::linalg::{AdjointKind, DenseMatrix, LinearOperator};

/// `A′_m = W_m H_mᵀ W_{m+1}ᵀ`, kept in factored form.
#[derive(Debug, Clone)]
pub struct TfPreconditioner {
    dec: ArnoldiDecomposition,
}

impl TfPreconditioner {
    pub fn new(dec: ArnoldiDecomposition) -> Result<Self> {
        if dec.steps() == 0 {
            return Err(Error::InvalidArgument("decomposition has no steps"));
        }
        Ok(Self { dec })
    }

    pub fn rank(&self) -> usize {
        self.dec.steps()
    }

    pub fn decomposition(&self) -> &ArnoldiDecomposition {
        &self.dec
    }

    /// Dense `N × N` form, for validation on small instances.
    pub fn materialize(&self) -> DenseMatrix {
        DenseMatrix::from_operator(self)
    }

    /// `C_m = W_{m+1} H_m`, so that `A A′_m = C_m C_mᵀ`.
    pub fn c_factor(&self) -> DenseMatrix {
        let m = self.rank();
        self.dec.basis_matrix(m + 1).matmul(&self.dec.hessenberg())
    }
}

impl LinearOperator for TfPreconditioner {
    fn nrows(&self) -> usize {
        self.dec.dim()
    }

    fn ncols(&self) -> usize {
        self.dec.dim()
    }

    fn forward(&self, y: &[f64], x: &mut [f64]) {
        let m = self.rank();
        let u = self.dec.project(y, m + 1);
        let s: vec::Vec<f64> = (0..m).map(|j| (0..=j + 1).map(|i| self.dec.h(i, j) * u[i]).sum()).collect();
        x.copy_from_slice(&self.dec.combine(&s));
    }

    fn adjoint_kind(&self) -> AdjointKind {
        AdjointKind::Exact
    }

    fn adjoint(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        let m = self.rank();
        if x.len() != self.ncols() || y.len() != self.nrows() {
            return Err(Error::DimensionMismatch { expected: self.ncols(), found: x.len() });
        }
        let s = self.dec.project(x, m);
        let mut u = vec![0.0; m + 1];
        for (j, &sj) in s.iter().enumerate() {
            for (i, ui) in u.iter_mut().enumerate().take(j + 2) {
                *ui += self.dec.h(i, j) * sj;
            }
        }
        y.copy_from_slice(&self.dec.combine(&u));
        Ok(())
    }
}
