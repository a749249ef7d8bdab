//! The (solver, seed) grid behind `run`.

use std::time::Instant;

use rayon::prelude::*;
use tfkrylov_core::deblur::{
    phantom, psf_gaussian_aniso, psf_motion, rp_gmres, BlurOperator, BlurredImageProblem, BoundaryCondition,
    Image, Psf,
};
use tfkrylov_core::krylov::{cgls, cgne, gmres, DiscrepancyRule, SolveTrace, SolverOptions, StopReason};
use tfkrylov_core::linalg::Transposed;
use tfkrylov_core::problems::{baart, heat, i_laplace, Discretization, LaplaceExample, TestProblem};
use tfkrylov_core::tfcg::{tf_solve, TfResult};
use tfkrylov_core::{dense_svd, norm2, DenseMatrix, LinearOperator, SvdFactorization};

use crate::config::{ExperimentConfig, Problem, SolverKind};
use crate::error::HarnessError;
use crate::pgm;
use crate::verify::{generator_conformance, Conformance};

/// One (solver, seed) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub problem: Problem,
    pub solver: SolverKind,
    pub seed: u64,
    pub rel_err_stop: f64,
    pub rel_err_best: f64,
    /// First iterate meeting the discrepancy principle; `None` if none did.
    pub k_stop: Option<usize>,
    /// First-cycle indices, transpose-free solvers only.
    pub stop_o: Option<usize>,
    pub stop_o_var3: Option<usize>,
    /// Zero unless timing was requested.
    pub wall_ms: f64,
}

/// Per-iterate history of one cell; index 0 is the zero initial guess.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub solver: SolverKind,
    pub seed: u64,
    pub rel_err: Vec<f64>,
    /// `‖b − A x_k‖ / ‖b‖`.
    pub rel_res: Vec<f64>,
}

/// Per-solver means over seeds. Fields averaging optional row values are
/// `None` when no row had one.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub solver: SolverKind,
    pub runs: usize,
    pub rel_err_stop: f64,
    pub rel_err_best: f64,
    pub k_stop: Option<f64>,
    pub stop_o: Option<f64>,
    pub stop_o_var3: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    /// Solvers in configuration order, seeds ascending within each solver.
    pub rows: Vec<ResultRow>,
    /// Same order as `rows`.
    pub series: Vec<Series>,
    pub summary: Vec<SummaryRow>,
    /// Asymmetry/rank check of the generator at its reference size.
    pub conformance: Option<Conformance>,
}

enum Instance {
    Dense { disc: Discretization, svd: Option<SvdFactorization> },
    Blur { scene: Image, psf: Psf, bc: BoundaryCondition },
}

struct Cell {
    row: ResultRow,
    series: Series,
}

pub(crate) fn discretization(problem: Problem, n: usize) -> Result<Discretization, HarnessError> {
    Ok(match problem {
        Problem::ILaplace1 => i_laplace(n, LaplaceExample::Exp)?,
        Problem::ILaplace2 => i_laplace(n, LaplaceExample::T2Exp)?,
        Problem::Baart => baart(n)?,
        Problem::Heat => heat(n)?,
        p => return Err(HarnessError::Config(format!("{} is not a dense problem", p.tag()))),
    })
}

pub(crate) fn problem_psf(problem: Problem, d: usize) -> Result<Psf, HarnessError> {
    Ok(match problem {
        Problem::DeblurGaussian => psf_gaussian_aniso(4.0, 1.3, 2.0, d)?,
        Problem::DeblurMotion => psf_motion(d, d)?,
        Problem::DeblurWide => psf_gaussian_aniso(6.0, 6.0, 0.0, d)?,
        p => return Err(HarnessError::Config(format!("{} is not a deblurring problem", p.tag()))),
    })
}

fn build_instance(cfg: &ExperimentConfig) -> Result<Instance, HarnessError> {
    if !cfg.problem.is_deblur() {
        let disc = discretization(cfg.problem, cfg.n)?;
        let svd = if cfg.solvers.contains(&SolverKind::Tsvd) { Some(dense_svd(&disc.a)?) } else { None };
        return Ok(Instance::Dense { disc, svd });
    }
    let psf = problem_psf(cfg.problem, cfg.psf_size)?;
    let margin = psf.reach();
    let scene = match &cfg.image {
        Some(path) => {
            let img = pgm::pgm_read(path)?;
            if img.width() != img.height() || img.width() < 8 + 2 * margin {
                return Err(HarnessError::Config(format!(
                    "{}: scene must be square with side at least {}",
                    path.display(),
                    8 + 2 * margin
                )));
            }
            img
        }
        None => phantom(cfg.n + 2 * margin),
    };
    Ok(Instance::Blur { scene, psf, bc: cfg.boundary })
}

fn series_from_trace(solver: SolverKind, seed: u64, trace: &SolveTrace, b_norm: f64) -> Series {
    Series {
        solver,
        seed,
        rel_err: trace.relative_errors.clone().unwrap_or_default(),
        rel_res: trace.residual_norms.iter().map(|r| r / b_norm).collect(),
    }
}

fn trace_row(cfg: &ExperimentConfig, solver: SolverKind, seed: u64, trace: &SolveTrace, b_norm: f64) -> Cell {
    let row = ResultRow {
        problem: cfg.problem,
        solver,
        seed,
        rel_err_stop: trace.relative_error_at_stop().unwrap_or(f64::NAN),
        rel_err_best: trace.best_relative_error().map_or(f64::NAN, |(_, e)| e),
        k_stop: trace.stop_iteration,
        stop_o: None,
        stop_o_var3: None,
        wall_ms: 0.0,
    };
    Cell { row, series: series_from_trace(solver, seed, trace, b_norm) }
}

fn tf_row(cfg: &ExperimentConfig, solver: SolverKind, seed: u64, res: &TfResult, b_norm: f64) -> Cell {
    let row = ResultRow {
        problem: cfg.problem,
        solver,
        seed,
        rel_err_stop: res.relative_error_at_stop().unwrap_or(f64::NAN),
        rel_err_best: res.best_relative_error().map_or(f64::NAN, |(_, e)| e),
        k_stop: res.k_stop,
        stop_o: res.stop_subdiag,
        stop_o_var3: res.stop_sigma_product,
        wall_ms: 0.0,
    };
    let series = Series {
        solver,
        seed,
        rel_err: res.relative_errors().unwrap_or_default(),
        rel_res: res.residual_norms().iter().map(|r| r / b_norm).collect(),
    };
    Cell { row, series }
}

/// Truncated SVD with truncation index `0..=m_max` playing the role of the
/// iteration count.
fn tsvd_trace(
    a: &DenseMatrix,
    svd: &SvdFactorization,
    b: &[f64],
    x_exact: &[f64],
    cfg: &ExperimentConfig,
) -> SolveTrace {
    let rule = DiscrepancyRule::new(cfg.tf.eta, cfg.eps_hat);
    let b_norm = norm2(b);
    let x_norm = norm2(x_exact);
    let max = cfg.tf.m_max.min(svd.sigma.len());
    let mut trace = SolveTrace {
        iterates: None,
        residual_norms: Vec::with_capacity(max + 1),
        relative_errors: Some(Vec::with_capacity(max + 1)),
        stop_iteration: None,
        stop_reason: StopReason::MaxIter,
        stop_solution: Vec::new(),
        best_solution: None,
    };
    let mut best = f64::INFINITY;
    for m in 0..=max {
        let x = svd.truncated_solve(b, m);
        let ax = a.matvec(&x);
        let res = norm2(&ax.iter().zip(b).map(|(p, q)| q - p).collect::<Vec<_>>());
        let err = norm2(&x.iter().zip(x_exact).map(|(p, q)| p - q).collect::<Vec<_>>()) / x_norm;
        trace.residual_norms.push(res);
        if let Some(e) = trace.relative_errors.as_mut() {
            e.push(err);
        }
        if err < best {
            best = err;
            trace.best_solution = Some(x.clone());
        }
        if trace.stop_iteration.is_none() {
            if rule.satisfied(res, b_norm) {
                trace.stop_iteration = Some(m);
                trace.stop_reason = StopReason::Discrepancy;
            }
            trace.stop_solution = x;
        }
    }
    trace
}

fn solver_options(cfg: &ExperimentConfig) -> SolverOptions {
    SolverOptions::new(cfg.tf.m_max)
        .with_discrepancy(DiscrepancyRule::new(cfg.tf.eta, cfg.eps_hat))
        .with_arnoldi(cfg.gmres_arnoldi)
}

fn run_cell<A, P>(
    cfg: &ExperimentConfig,
    solver: SolverKind,
    seed: u64,
    a: &A,
    a_prime: &P,
    b: &[f64],
    x_exact: &[f64],
) -> Result<Cell, HarnessError>
where
    A: LinearOperator + ?Sized,
    P: LinearOperator + ?Sized,
{
    let b_norm = norm2(b);
    let opts = solver_options(cfg);
    let x = Some(x_exact);
    Ok(match solver {
        SolverKind::Gmres => trace_row(cfg, solver, seed, &gmres(a, b, &opts, x)?, b_norm),
        SolverKind::Cgls => trace_row(cfg, solver, seed, &cgls(a, b, &opts, x)?, b_norm),
        SolverKind::Cgne => trace_row(cfg, solver, seed, &cgne(a, b, &opts, x)?, b_norm),
        SolverKind::RpGmres => trace_row(cfg, solver, seed, &rp_gmres(a, a_prime, b, &opts, x)?, b_norm),
        SolverKind::TfCgls | SolverKind::TfCgne => {
            tf_row(cfg, solver, seed, &tf_solve(a, b, &cfg.tf_for(solver), x)?, b_norm)
        }
        SolverKind::Tsvd => unreachable!("tsvd is dispatched with the dense instance"),
    })
}

fn compute_cell(cfg: &ExperimentConfig, inst: &Instance, solver: SolverKind, seed: u64) -> Result<Cell, HarnessError> {
    let start = cfg.timing.then(Instant::now);
    let mut cell = match inst {
        Instance::Dense { disc, svd } => {
            let p = TestProblem::new(disc.clone(), cfg.eps_hat, seed)?;
            if solver == SolverKind::Tsvd {
                let svd = svd.as_ref().expect("SVD computed when tsvd is requested");
                let trace = tsvd_trace(&p.a, svd, &p.b, &p.x_exact, cfg);
                trace_row(cfg, solver, seed, &trace, norm2(&p.b))
            } else {
                run_cell(cfg, solver, seed, &p.a, &Transposed(&p.a), &p.b, &p.x_exact)?
            }
        }
        Instance::Blur { scene, psf, bc } => {
            let p = BlurredImageProblem::new(scene, psf.clone(), *bc, cfg.eps_hat, seed)?;
            let rotated: BlurOperator = p.op.rotated();
            run_cell(cfg, solver, seed, &p.op, &rotated, &p.b, &p.x_exact)?
        }
    };
    if let Some(t) = start {
        cell.row.wall_ms = t.elapsed().as_secs_f64() * 1e3;
    }
    Ok(cell)
}

/// Runs every (solver, seed) cell, in parallel across cells.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    let conformance = generator_conformance(cfg.problem, cfg.n)?;
    let inst = build_instance(cfg)?;
    let grid: Vec<(SolverKind, u64)> =
        cfg.solvers.iter().flat_map(|&s| cfg.seeds.iter().map(move |&seed| (s, seed))).collect();
    let cells = grid
        .par_iter()
        .map(|&(solver, seed)| compute_cell(cfg, &inst, solver, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let (rows, series): (Vec<_>, Vec<_>) = cells.into_iter().map(|c| (c.row, c.series)).unzip();
    let summary = summarize(&rows, &cfg.solvers);
    Ok(ExperimentOutput { rows, series, summary, conformance })
}

fn mean_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Per-solver means, accumulated seed-ascending.
pub fn summarize(rows: &[ResultRow], solvers: &[SolverKind]) -> Vec<SummaryRow> {
    solvers
        .iter()
        .map(|&solver| {
            let mut mine: Vec<&ResultRow> = rows.iter().filter(|r| r.solver == solver).collect();
            mine.sort_by_key(|r| r.seed);
            let opt_mean = |f: fn(&ResultRow) -> Option<usize>| mean_of(mine.iter().filter_map(|r| f(r)).map(|v| v as f64));
            SummaryRow {
                solver,
                runs: mine.len(),
                rel_err_stop: mean_of(mine.iter().map(|r| r.rel_err_stop)).unwrap_or(f64::NAN),
                rel_err_best: mean_of(mine.iter().map(|r| r.rel_err_best)).unwrap_or(f64::NAN),
                k_stop: opt_mean(|r| r.k_stop),
                stop_o: opt_mean(|r| r.stop_o),
                stop_o_var3: opt_mean(|r| r.stop_o_var3),
            }
        })
        .collect()
}
