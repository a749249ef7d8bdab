use alloc::vec;
use alloc::vec::Vec;

use super::trace::{SolveTrace, SolverOptions, StopReason, TraceRecorder};
use crate::arnoldi::ArnoldiDecomposition;
use crate::error::{Error, Result};
use crate::linalg::vector::{norm2, sub};
use crate::linalg::{dense_svd, LinearOperator};

/// GMRES with the projected least-squares problem `min ‖H_m s − ‖b‖e₁‖`
/// solved through an SVD of `H_m` at every step.
pub fn gmres<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    opts: &SolverOptions,
    exact: Option<&[f64]>,
) -> Result<SolveTrace> {
    gmres_with_map(op, b, opts, exact, |y: &[f64]| Ok(y.to_vec()))
}

/// GMRES on `op y = b` where the recorded iterate is `map(y_m)`. Residuals
/// stay those of `op`.
pub fn gmres_with_map<O, F>(
    op: &O,
    b: &[f64],
    opts: &SolverOptions,
    exact: Option<&[f64]>,
    map: F,
) -> Result<SolveTrace>
where
    O: LinearOperator + ?Sized,
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if b.len() != op.ncols() || op.nrows() != op.ncols() {
        return Err(Error::DimensionMismatch { expected: op.ncols(), found: b.len() });
    }
    let mut dec = ArnoldiDecomposition::start(b, opts.arnoldi)?;
    let beta = dec.beta();
    let mut rec = TraceRecorder::new(beta, exact, opts);
    let zero = map(&vec![0.0; b.len()])?;
    if rec.record(&zero, beta) {
        return Ok(rec.finish(StopReason::Discrepancy));
    }
    let mut reason = StopReason::MaxIter;
    for m in 1..=opts.max_iter {
        dec.expand(op, m)?;
        if dec.steps() < m {
            break;
        }
        let h = dec.hessenberg();
        let mut rhs = vec![0.0; m + 1];
        rhs[0] = beta;
        let svd = dense_svd(&h)?;
        let s1 = svd.sigma[0];
        let keep = svd.sigma.iter().filter(|&&s| s > f64::EPSILON * s1).count();
        let s = svd.truncated_solve(&rhs, keep);
        let residual = norm2(&sub(&h.matvec(&s), &rhs));
        let x = map(&dec.combine(&s))?;
        if rec.record(&x, residual) {
            return Ok(rec.finish(StopReason::Discrepancy));
        }
        if dec.breakdown() {
            reason = StopReason::Breakdown;
            break;
        }
    }
    Ok(rec.finish(reason))
}
