//! MINRES and CG for small symmetric positive semidefinite systems
//! `M t = g`, as produced by the projected problem `H_m H_mᵀ t = ‖b‖ e₁`.

use alloc::vec;
use alloc::vec::Vec;

use super::trace::StopReason;
use crate::error::{Error, Result};
use crate::linalg::vector::{axpy, dot, norm2, sub};
use crate::linalg::DenseMatrix;

/// Relative decrease below which a MINRES step counts as stagnant.
const STAGNATION_RTOL: f64 = 1e-14;
/// Consecutive stagnant steps tolerated before giving up.
const STAGNATION_STEPS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedIterate {
    pub t: Vec<f64>,
    /// `‖g − M t‖`, evaluated explicitly.
    pub residual: f64,
}

/// Iterates for `k = 1, 2, …` and the reason the recurrence ended.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedSolve {
    pub iterates: Vec<ProjectedIterate>,
    pub termination: StopReason,
}

fn validate(m: &DenseMatrix, g: &[f64], k_max: usize) -> Result<f64> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::InvalidArgument("projected matrix must be square"));
    }
    if g.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.len() });
    }
    if k_max > n {
        return Err(Error::InvalidArgument("k_max exceeds the system dimension"));
    }
    let scale = m.max_abs();
    if m.sub(&m.transpose()).max_abs() > 1e-10 * scale {
        return Err(Error::InvalidArgument("projected matrix is not symmetric"));
    }
    Ok(scale)
}

fn explicit_residual(m: &DenseMatrix, g: &[f64], t: &[f64]) -> f64 {
    norm2(&sub(g, &m.matvec(t)))
}

/// MINRES (Lanczos with Givens rotations): `t_k` minimizes `‖M t − g‖` over
/// `K_k(M, g)`.
pub fn minres_spd(m: &DenseMatrix, g: &[f64], k_max: usize) -> Result<ProjectedSolve> {
    let scale = validate(m, g, k_max)?;
    let n = g.len();
    let mut out = Vec::with_capacity(k_max);
    let beta1 = norm2(g);
    if beta1 == 0.0 {
        return Ok(ProjectedSolve { iterates: out, termination: StopReason::Breakdown });
    }

    let mut x = vec![0.0; n];
    let mut r1 = g.to_vec();
    let mut r2 = g.to_vec();
    let mut y = g.to_vec();
    let mut v = vec![0.0; n];
    let (mut w, mut w1, mut w2) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut oldb = 0.0;
    let mut beta = beta1;
    let (mut dbar, mut epsln, mut phibar) = (0.0, 0.0, beta1);
    let (mut cs, mut sn) = (-1.0_f64, 0.0_f64);
    let mut anorm = 0.0_f64;
    let mut stagnant = 0;

    for k in 1..=k_max {
        for (vi, yi) in v.iter_mut().zip(&y) {
            *vi = yi / beta;
        }
        y = m.matvec(&v);
        if k >= 2 {
            axpy(-beta / oldb, &r1, &mut y);
        }
        let alfa = dot(&v, &y);
        axpy(-alfa / beta, &r2, &mut y);
        core::mem::swap(&mut r1, &mut r2);
        r2.copy_from_slice(&y);
        oldb = beta;
        beta = norm2(&r2);
        anorm = anorm.max(alfa.abs()).max(beta).max(oldb);

        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = libm::hypot(gbar, beta).max(f64::EPSILON * scale.max(f64::MIN_POSITIVE));
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;

        core::mem::swap(&mut w1, &mut w2);
        core::mem::swap(&mut w2, &mut w);
        for i in 0..n {
            w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
        }
        axpy(phi, &w, &mut x);

        let residual = explicit_residual(m, g, &x);
        if let Some(prev) = out.last().map(|p: &ProjectedIterate| p.residual) {
            if residual >= prev * (1.0 - STAGNATION_RTOL) {
                stagnant += 1;
            } else {
                stagnant = 0;
            }
        }
        out.push(ProjectedIterate { t: x.clone(), residual });
        if beta <= 1e-14 * anorm {
            return Ok(ProjectedSolve { iterates: out, termination: StopReason::Breakdown });
        }
        if stagnant >= STAGNATION_STEPS {
            return Ok(ProjectedSolve { iterates: out, termination: StopReason::Stagnation });
        }
    }
    Ok(ProjectedSolve { iterates: out, termination: StopReason::MaxIter })
}

/// Conjugate gradients: Galerkin condition `g − M t_k ⟂ K_k(M, g)`.
pub fn cg_spd(m: &DenseMatrix, g: &[f64], k_max: usize) -> Result<ProjectedSolve> {
    let scale = validate(m, g, k_max)?;
    let n = g.len();
    let mut out = Vec::with_capacity(k_max);
    let mut x = vec![0.0; n];
    let mut r = g.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    if rr == 0.0 {
        return Ok(ProjectedSolve { iterates: out, termination: StopReason::Breakdown });
    }
    for _ in 0..k_max {
        let q = m.matvec(&p);
        let pq = dot(&p, &q);
        if !(pq > 1e-14 * scale * dot(&p, &p)) {
            return Ok(ProjectedSolve { iterates: out, termination: StopReason::Breakdown });
        }
        let alpha = rr / pq;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &q, &mut r);
        out.push(ProjectedIterate { t: x.clone(), residual: explicit_residual(m, g, &x) });
        let rr_new = dot(&r, &r);
        if rr_new == 0.0 {
            return Ok(ProjectedSolve { iterates: out, termination: StopReason::Breakdown });
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
    Ok(ProjectedSolve { iterates: out, termination: StopReason::MaxIter })
}
