use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// How trustworthy an operator's transpose action is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdjointKind {
    /// `adjoint` is the true transpose.
    Exact,
    /// `adjoint` is only an approximation of the transpose.
    Surrogate,
    /// No transpose action is available.
    Absent,
}

/// A real linear map known only through its action on vectors.
///
/// `forward` and `adjoint` write into caller-provided buffers and assume the
/// lengths were already checked; [`LinearOperator::apply`] and
/// [`LinearOperator::apply_adjoint`] check them.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;

    fn forward(&self, x: &[f64], y: &mut [f64]);

    fn adjoint_kind(&self) -> AdjointKind {
        AdjointKind::Absent
    }

    fn adjoint(&self, _y: &[f64], _x: &mut [f64]) -> Result<()> {
        Err(Error::Unsupported("a transpose action"))
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.ncols() {
            return Err(Error::DimensionMismatch { expected: self.ncols(), found: x.len() });
        }
        let mut y = vec![0.0; self.nrows()];
        self.forward(x, &mut y);
        Ok(y)
    }

    fn apply_adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.nrows() {
            return Err(Error::DimensionMismatch { expected: self.nrows(), found: y.len() });
        }
        let mut x = vec![0.0; self.ncols()];
        self.adjoint(y, &mut x)?;
        Ok(x)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn nrows(&self) -> usize {
        (**self).nrows()
    }
    fn ncols(&self) -> usize {
        (**self).ncols()
    }
    fn forward(&self, x: &[f64], y: &mut [f64]) {
        (**self).forward(x, y)
    }
    fn adjoint_kind(&self) -> AdjointKind {
        (**self).adjoint_kind()
    }
    fn adjoint(&self, y: &[f64], x: &mut [f64]) -> Result<()> {
        (**self).adjoint(y, x)
    }
}

/// Checked forward application.
pub fn apply<O: LinearOperator + ?Sized>(op: &O, x: &[f64]) -> Result<Vec<f64>> {
    op.apply(x)
}

#[derive(Debug, Clone, Copy)]
pub struct Identity(pub usize);

impl LinearOperator for Identity {
    fn nrows(&self) -> usize {
        self.0
    }
    fn ncols(&self) -> usize {
        self.0
    }
    fn forward(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }
    fn adjoint_kind(&self) -> AdjointKind {
        AdjointKind::Exact
    }
    fn adjoint(&self, y: &[f64], x: &mut [f64]) -> Result<()> {
        x.copy_from_slice(y);
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Diagonal(pub Vec<f64>);

impl LinearOperator for Diagonal {
    fn nrows(&self) -> usize {
        self.0.len()
    }
    fn ncols(&self) -> usize {
        self.0.len()
    }
    fn forward(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, xi), d) in y.iter_mut().zip(x).zip(&self.0) {
            *yi = d * xi;
        }
    }
    fn adjoint_kind(&self) -> AdjointKind {
        AdjointKind::Exact
    }
    fn adjoint(&self, y: &[f64], x: &mut [f64]) -> Result<()> {
        self.forward(y, x);
        Ok(())
    }
}

/// `outer ∘ inner`, i.e. `x ↦ outer(inner(x))`.
#[derive(Debug, Clone)]
pub struct Composed<A, B> {
    pub outer: A,
    pub inner: B,
}

impl<A: LinearOperator, B: LinearOperator> Composed<A, B> {
    pub fn new(outer: A, inner: B) -> Result<Self> {
        if outer.ncols() != inner.nrows() {
            return Err(Error::DimensionMismatch { expected: outer.ncols(), found: inner.nrows() });
        }
        Ok(Self { outer, inner })
    }
}

impl<A: LinearOperator, B: LinearOperator> LinearOperator for Composed<A, B> {
    fn nrows(&self) -> usize {
        self.outer.nrows()
    }
    fn ncols(&self) -> usize {
        self.inner.ncols()
    }
    fn forward(&self, x: &[f64], y: &mut [f64]) {
        let mut tmp = vec![0.0; self.inner.nrows()];
        self.inner.forward(x, &mut tmp);
        self.outer.forward(&tmp, y);
    }
    fn adjoint_kind(&self) -> AdjointKind {
        match (self.outer.adjoint_kind(), self.inner.adjoint_kind()) {
            (AdjointKind::Exact, AdjointKind::Exact) => AdjointKind::Exact,
            (AdjointKind::Absent, _) | (_, AdjointKind::Absent) => AdjointKind::Absent,
            _ => AdjointKind::Surrogate,
        }
    }
    fn adjoint(&self, y: &[f64], x: &mut [f64]) -> Result<()> {
        let mut tmp = vec![0.0; self.outer.ncols()];
        self.outer.adjoint(y, &mut tmp)?;
        self.inner.adjoint(&tmp, x)
    }
}

/// Swaps the roles of `forward` and `adjoint`.
#[derive(Debug, Clone)]
pub struct Transposed<A>(pub A);

impl<A: LinearOperator> LinearOperator for Transposed<A> {
    fn nrows(&self) -> usize {
        self.0.ncols()
    }
    fn ncols(&self) -> usize {
        self.0.nrows()
    }
    fn forward(&self, x: &[f64], y: &mut [f64]) {
        self.0.adjoint(x, y).expect("transposed operator requires an adjoint");
    }
    fn adjoint_kind(&self) -> AdjointKind {
        self.0.adjoint_kind()
    }
    fn adjoint(&self, y: &[f64], x: &mut [f64]) -> Result<()> {
        self.0.forward(y, x);
        Ok(())
    }
}
