use alloc::vec::Vec;

use crate::arnoldi::ArnoldiOptions;
use crate::linalg::vector::relative_error;

/// Why an iteration ended or which criterion selected the reported iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    Discrepancy,
    MaxIter,
    Breakdown,
    Stagnation,
}

/// `‖r‖ < η ε̂ ‖b‖`
pub fn discrepancy_check(reduced_residual: f64, eta: f64, eps_hat: f64, b_norm: f64) -> bool {
    reduced_residual < eta * eps_hat * b_norm
}

/// Discrepancy principle with safety factor `eta > 1` and noise level
/// `eps_hat = ‖e‖/‖b_ex‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyRule {
    pub eta: f64,
    pub eps_hat: f64,
}

impl DiscrepancyRule {
    pub fn new(eta: f64, eps_hat: f64) -> Self {
        Self { eta, eps_hat }
    }

    pub fn satisfied(&self, residual: f64, b_norm: f64) -> bool {
        discrepancy_check(residual, self.eta, self.eps_hat, b_norm)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub max_iter: usize,
    pub discrepancy: Option<DiscrepancyRule>,
    /// Stop as soon as the discrepancy principle fires instead of running to
    /// `max_iter`.
    pub halt_on_discrepancy: bool,
    pub keep_iterates: bool,
    /// Arnoldi flavour for GMRES-type solvers.
    pub arnoldi: ArnoldiOptions,
}

impl SolverOptions {
    pub fn new(max_iter: usize) -> Self {
        Self {
            max_iter,
            discrepancy: None,
            halt_on_discrepancy: false,
            keep_iterates: false,
            arnoldi: ArnoldiOptions::default(),
        }
    }

    pub fn with_discrepancy(mut self, rule: DiscrepancyRule) -> Self {
        self.discrepancy = Some(rule);
        self
    }

    pub fn with_arnoldi(mut self, arnoldi: ArnoldiOptions) -> Self {
        self.arnoldi = arnoldi;
        self
    }

    pub fn keeping_iterates(mut self) -> Self {
        self.keep_iterates = true;
        self
    }

    pub fn halting(mut self) -> Self {
        self.halt_on_discrepancy = true;
        self
    }
}

/// Iteration history. Index 0 is the zero initial guess.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace {
    pub iterates: Option<Vec<Vec<f64>>>,
    /// `‖b − A x_k‖` for `k = 0, 1, …`.
    pub residual_norms: Vec<f64>,
    /// `‖x_k − x_ex‖ / ‖x_ex‖` when the exact solution was supplied.
    pub relative_errors: Option<Vec<f64>>,
    /// First iteration satisfying the discrepancy principle.
    pub stop_iteration: Option<usize>,
    pub stop_reason: StopReason,
    /// Iterate at `stop_iteration`, or the last one when it never fired.
    pub stop_solution: Vec<f64>,
    /// Iterate with the smallest relative error, when errors are tracked.
    pub best_solution: Option<Vec<f64>>,
}

impl SolveTrace {
    /// Number of iterations performed.
    pub fn iterations(&self) -> usize {
        self.residual_norms.len().saturating_sub(1)
    }

    /// `(k, error)` with the smallest relative error.
    pub fn best_relative_error(&self) -> Option<(usize, f64)> {
        let errs = self.relative_errors.as_ref()?;
        errs.iter()
            .copied()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (k, e)| match best {
                Some((_, b)) if b <= e => best,
                _ => Some((k, e)),
            })
    }

    /// Relative error at the discrepancy stop, or at the last iterate.
    pub fn relative_error_at_stop(&self) -> Option<f64> {
        let errs = self.relative_errors.as_ref()?;
        let k = self.stop_iteration.unwrap_or(errs.len() - 1);
        errs.get(k).copied()
    }
}

/// Shared bookkeeping for the iterative solvers.
pub(crate) struct TraceRecorder<'a> {
    b_norm: f64,
    exact: Option<&'a [f64]>,
    opts: &'a SolverOptions,
    trace: SolveTrace,
    best_err: f64,
}

impl<'a> TraceRecorder<'a> {
    pub fn new(b_norm: f64, exact: Option<&'a [f64]>, opts: &'a SolverOptions) -> Self {
        Self {
            b_norm,
            exact,
            opts,
            trace: SolveTrace {
                iterates: opts.keep_iterates.then(Vec::new),
                residual_norms: Vec::new(),
                relative_errors: exact.map(|_| Vec::new()),
                stop_iteration: None,
                stop_reason: StopReason::MaxIter,
                stop_solution: Vec::new(),
                best_solution: None,
            },
            best_err: f64::INFINITY,
        }
    }

    /// Records the next iterate; returns `true` when the caller should halt.
    pub fn record(&mut self, x: &[f64], residual: f64) -> bool {
        let k = self.trace.residual_norms.len();
        self.trace.residual_norms.push(residual);
        if let (Some(xe), Some(errs)) = (self.exact, self.trace.relative_errors.as_mut()) {
            let e = relative_error(x, xe);
            errs.push(e);
            if e < self.best_err {
                self.best_err = e;
                self.trace.best_solution = Some(x.to_vec());
            }
        }
        if let Some(it) = self.trace.iterates.as_mut() {
            it.push(x.to_vec());
        }
        if self.trace.stop_iteration.is_none() {
            self.trace.stop_solution = x.to_vec();
            if let Some(rule) = self.opts.discrepancy {
                if rule.satisfied(residual, self.b_norm) {
                    self.trace.stop_iteration = Some(k);
                    self.trace.stop_reason = StopReason::Discrepancy;
                    return self.opts.halt_on_discrepancy;
                }
            }
        }
        false
    }

    pub fn finish(mut self, reason: StopReason) -> SolveTrace {
        if self.trace.stop_iteration.is_none() {
            self.trace.stop_reason = reason;
        }
        self.trace
    }
}
