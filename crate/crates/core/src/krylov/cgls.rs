use alloc::vec;

use super::trace::{SolveTrace, SolverOptions, StopReason, TraceRecorder};
use crate::error::{Error, Result};
use crate::linalg::vector::{axpy, dot, norm2};
use crate::linalg::{AdjointKind, LinearOperator};

/// Iteration ends once `‖Aᵀr‖` (CGLS) or `‖r‖` (CGNE) has dropped below this
/// fraction of its starting value.
const BREAKDOWN_RTOL: f64 = 1e-14;

fn check<O: LinearOperator + ?Sized>(op: &O, b: &[f64]) -> Result<()> {
    if op.adjoint_kind() != AdjointKind::Exact {
        return Err(Error::Unsupported("an exact transpose"));
    }
    if b.len() != op.nrows() {
        return Err(Error::DimensionMismatch { expected: op.nrows(), found: b.len() });
    }
    if norm2(b) == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// CGLS: `x_k ∈ K_k(AᵀA, Aᵀb)` minimizing `‖b − A x‖`.
pub fn cgls<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    opts: &SolverOptions,
    exact: Option<&[f64]>,
) -> Result<SolveTrace> {
    check(op, b)?;
    let (nr, nc) = (op.nrows(), op.ncols());
    let b_norm = norm2(b);
    let mut rec = TraceRecorder::new(b_norm, exact, opts);
    let mut x = vec![0.0; nc];
    if rec.record(&x, b_norm) {
        return Ok(rec.finish(StopReason::Discrepancy));
    }
    let mut r = b.to_vec();
    let mut s = vec![0.0; nc];
    op.adjoint(&r, &mut s)?;
    let mut p = s.clone();
    let mut gamma = dot(&s, &s);
    let gamma_floor = BREAKDOWN_RTOL * BREAKDOWN_RTOL * gamma;
    let mut q = vec![0.0; nr];
    for _ in 0..opts.max_iter {
        if gamma <= gamma_floor {
            return Ok(rec.finish(StopReason::Breakdown));
        }
        op.forward(&p, &mut q);
        let qq = dot(&q, &q);
        if qq == 0.0 {
            return Ok(rec.finish(StopReason::Breakdown));
        }
        let alpha = gamma / qq;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &q, &mut r);
        if rec.record(&x, norm2(&r)) {
            return Ok(rec.finish(StopReason::Discrepancy));
        }
        op.adjoint(&r, &mut s)?;
        let gamma_new = dot(&s, &s);
        let beta = gamma_new / gamma;
        gamma = gamma_new;
        for (pi, si) in p.iter_mut().zip(&s) {
            *pi = si + beta * *pi;
        }
    }
    Ok(rec.finish(StopReason::MaxIter))
}

/// CGNE (Craig's method): `x_k ∈ Aᵀ K_k(AAᵀ, b)` minimizing the error norm.
pub fn cgne<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    opts: &SolverOptions,
    exact: Option<&[f64]>,
) -> Result<SolveTrace> {
    check(op, b)?;
    let (nr, nc) = (op.nrows(), op.ncols());
    let b_norm = norm2(b);
    let mut rec = TraceRecorder::new(b_norm, exact, opts);
    let mut x = vec![0.0; nc];
    if rec.record(&x, b_norm) {
        return Ok(rec.finish(StopReason::Discrepancy));
    }
    let mut r = b.to_vec();
    let mut p = vec![0.0; nc];
    op.adjoint(&r, &mut p)?;
    let mut rho = dot(&r, &r);
    let rho_floor = BREAKDOWN_RTOL * BREAKDOWN_RTOL * rho;
    let mut q = vec![0.0; nr];
    let mut s = vec![0.0; nc];
    for _ in 0..opts.max_iter {
        let pp = dot(&p, &p);
        if pp == 0.0 || rho <= rho_floor {
            return Ok(rec.finish(StopReason::Breakdown));
        }
        let alpha = rho / pp;
        axpy(alpha, &p, &mut x);
        op.forward(&p, &mut q);
        axpy(-alpha, &q, &mut r);
        if rec.record(&x, norm2(&r)) {
            return Ok(rec.finish(StopReason::Discrepancy));
        }
        let rho_new = dot(&r, &r);
        let beta = rho_new / rho;
        rho = rho_new;
        op.adjoint(&r, &mut s)?;
        for (pi, si) in p.iter_mut().zip(&s) {
            *pi = si + beta * *pi;
        }
    }
    Ok(rec.finish(StopReason::MaxIter))
}
