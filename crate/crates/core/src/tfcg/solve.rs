use alloc::vec;
use alloc::vec::Vec;

use super::config::{FirstStop, InnerSolver, TfConfig};
use super::stopping::{stop_sigma_product, stop_subdiag, StoppingDiagnostics};
use crate::arnoldi::ArnoldiDecomposition;
use crate::error::{Error, Result};
use crate::krylov::{cg_spd, discrepancy_check, minres_spd, StopReason};
use crate::linalg::vector::{norm2, relative_error};
use crate::linalg::LinearOperator;

/// Why the first cycle ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FirstCycleEnd {
    Subdiag,
    SigmaProduct,
    Fixed,
    /// `m_max` reached without the requested rule firing.
    MaxSteps,
    /// The Krylov space became invariant before any rule fired.
    Breakdown,
}

/// Second-cycle iterate `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TfStep {
    /// Coefficients `t_k` of the projected system, length `m + 1`.
    pub t: Vec<f64>,
    /// `‖b − A x_{m,k}‖`, computed in the projected space.
    pub reduced_residual: f64,
    pub relative_error: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TfResult {
    pub m_used: usize,
    pub first_cycle: FirstCycleEnd,
    /// Iterates `k = 0, 1, …`; `k = 0` is `x = 0`.
    pub per_k: Vec<TfStep>,
    /// First `k` satisfying the discrepancy principle.
    pub k_stop: Option<usize>,
    /// `k` with the smallest reduced residual.
    pub best_residual_k: usize,
    pub termination: StopReason,
    /// Covers every Arnoldi step taken, which may exceed `m_used` so that
    /// both first-cycle rules get recorded.
    pub diagnostics: StoppingDiagnostics,
    /// `m_used`-step decomposition behind `A′_m`.
    pub decomposition: ArnoldiDecomposition,
    pub stop_subdiag: Option<usize>,
    pub stop_sigma_product: Option<usize>,
}

impl TfResult {
    /// Number of second-cycle iterations.
    pub fn iterations(&self) -> usize {
        self.per_k.len() - 1
    }

    /// `x_{m,k} = W_m H_mᵀ t_k`.
    pub fn solution(&self, k: usize) -> Result<Vec<f64>> {
        let step = self
            .per_k
            .get(k)
            .ok_or(Error::IndexOutOfRange { index: k, max: self.iterations() })?;
        recover_solution(&self.decomposition, &step.t)
    }

    /// `k_stop`, or the last iterate when the discrepancy principle never fired.
    pub fn stop_index(&self) -> usize {
        self.k_stop.unwrap_or(self.iterations())
    }

    pub fn stop_solution(&self) -> Result<Vec<f64>> {
        self.solution(self.stop_index())
    }

    pub fn relative_error_at_stop(&self) -> Option<f64> {
        self.per_k[self.stop_index()].relative_error
    }

    /// `(k, error)` with the smallest relative error.
    pub fn best_relative_error(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (k, s) in self.per_k.iter().enumerate() {
            let e = s.relative_error?;
            if best.map_or(true, |(_, b)| e < b) {
                best = Some((k, e));
            }
        }
        best
    }

    pub fn residual_norms(&self) -> Vec<f64> {
        self.per_k.iter().map(|s| s.reduced_residual).collect()
    }

    pub fn relative_errors(&self) -> Option<Vec<f64>> {
        self.per_k.iter().map(|s| s.relative_error).collect()
    }
}

/// `x = W_m (H_mᵀ t)` for `t` of length `m + 1`.
pub fn recover_solution(dec: &ArnoldiDecomposition, t: &[f64]) -> Result<Vec<f64>> {
    let m = dec.steps();
    if t.len() != m + 1 {
        return Err(Error::DimensionMismatch { expected: m + 1, found: t.len() });
    }
    let s: Vec<f64> = (0..m).map(|j| (0..=j + 1).map(|i| dec.h(i, j) * t[i]).sum()).collect();
    Ok(dec.combine(&s))
}

fn chosen_stop(rule: FirstStop, sub: Option<usize>, prod: Option<usize>, steps: usize) -> Option<(usize, FirstCycleEnd)> {
    match rule {
        FirstStop::Subdiag => sub.map(|m| (m, FirstCycleEnd::Subdiag)),
        FirstStop::SigmaProduct => prod.map(|m| (m, FirstCycleEnd::SigmaProduct)),
        FirstStop::Both => match (sub, prod) {
            (Some(a), Some(b)) if b < a => Some((b, FirstCycleEnd::SigmaProduct)),
            (Some(a), _) => Some((a, FirstCycleEnd::Subdiag)),
            (None, Some(b)) => Some((b, FirstCycleEnd::SigmaProduct)),
            (None, None) => None,
        },
        FirstStop::Fixed(m) => (steps >= m).then_some((m, FirstCycleEnd::Fixed)),
    }
}

/// Two-cycle transpose-free solve of `A x = b`.
///
/// The first cycle keeps expanding past the chosen stopping rule until both
/// rules have fired or the step cap is reached, so that both indices are
/// always reported; the solve itself uses the chosen `m`. The second cycle
/// runs to `k_max` and returns the whole trace.
pub fn tf_solve<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    cfg: &TfConfig,
    x_exact: Option<&[f64]>,
) -> Result<TfResult> {
    cfg.validate()?;
    let n = op.ncols();
    if op.nrows() != n || b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    if let Some(xe) = x_exact {
        if xe.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: xe.len() });
        }
    }
    let b_norm = norm2(b);
    if b_norm == 0.0 {
        return Err(Error::ZeroVector);
    }

    let start = if cfg.range_restricted { op.apply(b)? } else { b.to_vec() };
    let mut dec = ArnoldiDecomposition::start(&start, cfg.arnoldi)?;
    let m_cap = match cfg.first_stop {
        FirstStop::Fixed(m) => m,
        _ => cfg.m_max,
    };
    let mut diag = StoppingDiagnostics::default();
    let mut chosen = None;
    let (mut sub, mut prod) = (None, None);
    for j in 1..=m_cap + 1 {
        dec.expand(op, j)?;
        diag.observe(&dec)?;
        sub = stop_subdiag(&diag, cfg.tau);
        prod = stop_sigma_product(&diag, cfg.tau_prime);
        if chosen.is_none() {
            chosen = chosen_stop(cfg.first_stop, sub, prod, dec.steps()).filter(|&(m, _)| m <= m_cap);
        }
        if dec.breakdown() || (chosen.is_some() && sub.is_some() && prod.is_some()) {
            break;
        }
    }
    let (m_used, first_cycle) = match chosen {
        Some(c) => c,
        None if dec.breakdown() && dec.steps() <= m_cap => (dec.steps(), FirstCycleEnd::Breakdown),
        None => (m_cap.min(dec.steps()), FirstCycleEnd::MaxSteps),
    };
    let dec = dec.truncated(m_used);

    let h = dec.hessenberg();
    let gram = h.gram_outer();
    let (g, outside_sq) = if cfg.range_restricted {
        let g = dec.project(b, m_used + 1);
        let gn = norm2(&g);
        (g, (b_norm * b_norm - gn * gn).max(0.0))
    } else {
        let mut g = vec![0.0; m_used + 1];
        g[0] = b_norm;
        (g, 0.0)
    };
    let k_max = cfg.k_max.unwrap_or(m_used).min(m_used + 1);
    let inner = match cfg.inner {
        InnerSolver::Minres => minres_spd(&gram, &g, k_max)?,
        InnerSolver::Cg => cg_spd(&gram, &g, k_max)?,
    };

    let error_of = |t: &[f64]| -> Result<Option<f64>> {
        match x_exact {
            Some(xe) => Ok(Some(relative_error(&recover_solution(&dec, t)?, xe))),
            None => Ok(None),
        }
    };
    let mut per_k = Vec::with_capacity(inner.iterates.len() + 1);
    let t0 = vec![0.0; m_used + 1];
    per_k.push(TfStep { relative_error: error_of(&t0)?, t: t0, reduced_residual: b_norm });
    for it in inner.iterates {
        let reduced_residual = libm::sqrt(it.residual * it.residual + outside_sq);
        per_k.push(TfStep { relative_error: error_of(&it.t)?, t: it.t, reduced_residual });
    }

    let k_stop = cfg.eps_hat.and_then(|eps| {
        per_k
            .iter()
            .position(|s| discrepancy_check(s.reduced_residual, cfg.eta, eps, b_norm))
    });
    let best_residual_k = per_k
        .iter()
        .enumerate()
        .fold(0, |best, (k, s)| if s.reduced_residual < per_k[best].reduced_residual { k } else { best });
    let termination = if k_stop.is_some() { StopReason::Discrepancy } else { inner.termination };

    Ok(TfResult {
        m_used,
        first_cycle,
        per_k,
        k_stop,
        best_residual_k,
        termination,
        diagnostics: diag,
        decomposition: dec,
        stop_subdiag: sub.filter(|&m| m <= m_cap),
        stop_sigma_product: prod.filter(|&m| m <= m_cap),
    })
}
