//! End-to-end acceptance suite. Each test prints one
//! `criterion N: PASS|FAIL` line with the measured values, then asserts.
//!
//! Run with `cargo test -p tfkrylov --test acceptance -- --nocapture`.

use nalgebra::{DMatrix, DVector};
use tfkrylov::config::{Problem, SolverKind};
use tfkrylov::verify::{generator_conformance, reference};
use tfkrylov::{run_experiment, ExperimentConfig, ExperimentOutput, ResultRow};
use tfkrylov_core::deblur::{phantom, psf_gaussian_aniso, psf_motion, BlurOperator, BlurredImageProblem, BoundaryCondition, Psf};
use tfkrylov_core::krylov::{cgls, gmres, SolverOptions};
use tfkrylov_core::problems::{baart, heat, i_laplace, LaplaceExample, NoiseRng, TestProblem};
use tfkrylov_core::tfcg::{
    tf_solve, verify_projected_equivalence, zeta_diagnostics, FirstStop, ProjectedEquivalence, TfConfig,
    TfPreconditioner, FIRST_CYCLE_BREAKDOWN_TOL,
};
use tfkrylov_core::{arnoldi_expand, matrix_norm2, ArnoldiOptions, DenseMatrix, LinearOperator};

struct Verdict {
    criterion: u32,
    checks: Vec<(String, bool)>,
}

impl Verdict {
    fn new(criterion: u32) -> Self {
        Self { criterion, checks: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push((label.into(), ok));
    }

    fn info(&mut self, label: impl Into<String>) {
        println!("  criterion {} info: {}", self.criterion, label.into());
    }

    fn finish(self) {
        let failed: Vec<&str> = self.checks.iter().filter(|(_, ok)| !ok).map(|(l, _)| l.as_str()).collect();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        let all: Vec<String> =
            self.checks.iter().map(|(l, ok)| format!("{}{l}", if *ok { "" } else { "!! " })).collect();
        println!("criterion {}: {status} | {}", self.criterion, all.join("; "));
        assert!(failed.is_empty(), "criterion {} failed: {}", self.criterion, failed.join("; "));
    }
}

fn in_range(v: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&v)
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn diff_norm(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

fn residual<O: LinearOperator + ?Sized>(op: &O, x: &[f64], b: &[f64]) -> f64 {
    diff_norm(&op.apply(x).unwrap(), b)
}

fn to_na(a: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

fn table_run(problem: Problem, solvers: &[SolverKind], arnoldi: Option<ArnoldiOptions>) -> ExperimentOutput {
    let mut cfg = ExperimentConfig::new(problem, (1..=20).collect(), solvers.to_vec()).unwrap();
    if let Some(a) = arnoldi {
        cfg.tf.arnoldi = ArnoldiOptions { breakdown_tol: FIRST_CYCLE_BREAKDOWN_TOL, ..a };
        cfg.gmres_arnoldi = a;
    }
    run_experiment(&cfg).unwrap()
}

fn rows(out: &ExperimentOutput, solver: SolverKind) -> Vec<&ResultRow> {
    out.rows.iter().filter(|r| r.solver == solver).collect()
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (s, c) = v.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    s / c as f64
}

/// Mean of per-seed `|TF-CGLS − CGLS|` at the discrepancy stop.
fn mean_gap(out: &ExperimentOutput) -> f64 {
    let tf = rows(out, SolverKind::TfCgls);
    let cg = rows(out, SolverKind::Cgls);
    mean(tf.iter().zip(&cg).map(|(a, b)| {
        assert_eq!(a.seed, b.seed);
        (a.rel_err_stop - b.rel_err_stop).abs()
    }))
}

fn summary_of(out: &ExperimentOutput, solver: SolverKind) -> &tfkrylov::SummaryRow {
    out.summary.iter().find(|s| s.solver == solver).unwrap()
}

const TABLE_SOLVERS: [SolverKind; 3] = [SolverKind::Gmres, SolverKind::Cgls, SolverKind::TfCgls];

#[test]
fn criterion_01_i_laplace_example_1() {
    let out = table_run(Problem::ILaplace1, &TABLE_SOLVERS, None);
    let (g, c, t) = (
        summary_of(&out, SolverKind::Gmres),
        summary_of(&out, SolverKind::Cgls),
        summary_of(&out, SolverKind::TfCgls),
    );
    let gap = mean_gap(&out);
    let mut v = Verdict::new(1);
    v.check(format!("GMRES {:.4} in [0.40, 0.90]", g.rel_err_stop), in_range(g.rel_err_stop, 0.40, 0.90));
    v.check(format!("CGLS {:.4} in [0.10, 0.25]", c.rel_err_stop), in_range(c.rel_err_stop, 0.10, 0.25));
    v.check(format!("TF-CGLS {:.4} in [0.10, 0.25]", t.rel_err_stop), in_range(t.rel_err_stop, 0.10, 0.25));
    v.check(format!("mean gap {gap:.4} < 0.02"), gap < 0.02);
    for s in [g, c, t] {
        let k = s.k_stop.unwrap_or(f64::NAN);
        v.check(format!("{} k_stop {k:.2} in [3, 8]", s.solver.tag()), in_range(k, 3.0, 8.0));
    }
    let so = t.stop_o.unwrap_or(f64::NAN);
    let s3 = t.stop_o_var3.unwrap_or(f64::NAN);
    let fired = rows(&out, SolverKind::TfCgls).iter().all(|r| r.stop_o.is_some() && r.stop_o_var3.is_some());
    v.check(format!("stopO {so:.2} in [15, 26]"), in_range(so, 15.0, 26.0));
    v.check(format!("stopOvar3 {s3:.2} in [14, 25]"), in_range(s3, 14.0, 25.0));
    v.check("both first-cycle rules fired on every seed", fired);
    v.finish();
}

#[test]
fn criterion_02_i_laplace_example_2() {
    let out = table_run(Problem::ILaplace2, &TABLE_SOLVERS, None);
    let (g, c, t) = (
        summary_of(&out, SolverKind::Gmres),
        summary_of(&out, SolverKind::Cgls),
        summary_of(&out, SolverKind::TfCgls),
    );
    let mut v = Verdict::new(2);
    v.check(format!("GMRES {:.4} > 1", g.rel_err_stop), g.rel_err_stop > 1.0);
    v.check(format!("CGLS {:.4} in [0.05, 0.15]", c.rel_err_stop), in_range(c.rel_err_stop, 0.05, 0.15));
    v.check(format!("TF-CGLS {:.4} in [0.05, 0.15]", t.rel_err_stop), in_range(t.rel_err_stop, 0.05, 0.15));
    for s in [c, t] {
        let k = s.k_stop.unwrap_or(f64::NAN);
        v.check(format!("{} k_stop {k:.2} = 5 ± 1", s.solver.tag()), (k - 5.0).abs() <= 1.0);
    }
    v.finish();
}

#[test]
fn criterion_03_baart() {
    let out = table_run(Problem::Baart, &TABLE_SOLVERS, None);
    let (g, c, t) = (
        summary_of(&out, SolverKind::Gmres),
        summary_of(&out, SolverKind::Cgls),
        summary_of(&out, SolverKind::TfCgls),
    );
    let mut v = Verdict::new(3);
    v.check(format!("GMRES {:.4} in [0.4, 0.8]", g.rel_err_stop), in_range(g.rel_err_stop, 0.4, 0.8));
    v.check(format!("CGLS {:.4} in [0.12, 0.25]", c.rel_err_stop), in_range(c.rel_err_stop, 0.12, 0.25));
    v.check(format!("TF-CGLS {:.4} in [0.12, 0.25]", t.rel_err_stop), in_range(t.rel_err_stop, 0.12, 0.25));
    for s in [g, c, t] {
        let k = s.k_stop.unwrap_or(f64::NAN);
        v.check(format!("{} k_stop {k:.2} = 3 ± 1", s.solver.tag()), (k - 3.0).abs() <= 1.0);
    }
    let so = t.stop_o.unwrap_or(f64::NAN);
    let s3 = t.stop_o_var3.unwrap_or(f64::NAN);
    v.check(format!("stopO {so:.2} in [7, 12]"), in_range(so, 7.0, 12.0));
    v.check(format!("stopOvar3 {s3:.2} in [12, 20]"), in_range(s3, 12.0, 20.0));
    v.finish();
}

#[test]
fn criterion_04_heat() {
    let mgs = table_run(Problem::Heat, &TABLE_SOLVERS, None);
    let hh = table_run(Problem::Heat, &[SolverKind::TfCgls], Some(ArnoldiOptions::householder()));
    let mut v = Verdict::new(4);
    let diverging = mgs
        .series
        .iter()
        .filter(|s| s.solver == SolverKind::Gmres)
        .filter(|s| s.rel_err.last().unwrap() > &s.rel_err[0])
        .count();
    v.check(format!("GMRES final error above initial on {diverging}/20 seeds"), diverging == 20);
    let g_best = summary_of(&mgs, SolverKind::Gmres).rel_err_best;
    let c_best = summary_of(&mgs, SolverKind::Cgls).rel_err_best;
    let tf_mgs = summary_of(&mgs, SolverKind::TfCgls).rel_err_best;
    let tf_hh = summary_of(&hh, SolverKind::TfCgls).rel_err_best;
    v.info(format!("best errors: GMRES {g_best:.4}, CGLS {c_best:.4}, TF-CGLS MGS {tf_mgs:.4}, TF-CGLS Householder {tf_hh:.4}"));
    v.check(format!("TF-CGLS (Householder) best {tf_hh:.4} < 0.5·GMRES best {g_best:.4}"), tf_hh < 0.5 * g_best);
    v.check(format!("CGLS best {c_best:.4} ≤ TF-CGLS best {tf_hh:.4}"), c_best <= tf_hh);
    v.check(
        format!("|MGS − Householder| TF-CGLS best {:.4} < 0.05", (tf_mgs - tf_hh).abs()),
        (tf_mgs - tf_hh).abs() < 0.05,
    );
    v.finish();
}

#[test]
fn criterion_05_generator_conformance() {
    let mut v = Verdict::new(5);
    for p in [Problem::ILaplace1, Problem::Baart, Problem::Heat] {
        let r = reference(p).unwrap();
        let c = generator_conformance(p, r.n).unwrap().unwrap();
        v.check(
            format!("{}({}) asymmetry {:.5} = {} ± {}", p.tag(), r.n, c.asymmetry, r.asymmetry, r.tol),
            (c.asymmetry - r.asymmetry).abs() <= r.tol,
        );
        if let Some(rank) = r.rank {
            v.check(format!("{} rank {:?} == {rank}", p.tag(), c.rank), c.rank == Some(rank));
        }
    }
    // independent spectral norm
    let a = to_na(&heat(200).unwrap().a);
    let ratio = (&a - a.transpose()).singular_values().max() / a.singular_values().max();
    v.check(format!("heat ratio via independent SVD {ratio:.5}"), (ratio - 1.1244).abs() <= 0.005);
    v.finish();
}

struct ArnoldiReport {
    residual: f64,
    orthogonality: f64,
    zeros_exact: bool,
    first_column: f64,
}

fn arnoldi_report<O: LinearOperator + ?Sized>(op: &O, b: &[f64], m: usize, opts: ArnoldiOptions, a_norm: Option<f64>) -> ArnoldiReport {
    let dec = arnoldi_expand(op, b, m, opts).unwrap();
    let m = dec.steps();
    let h = dec.hessenberg();
    let mut worst = 0.0f64;
    for j in 0..m {
        let aw = op.apply(&dec.basis()[j]).unwrap();
        let wh = dec.combine(&(0..=m).map(|i| h[(i, j)]).collect::<Vec<_>>());
        worst = worst.max(diff_norm(&aw, &wh));
    }
    // ‖A‖ ≥ σ₁(H_m), so the relative measure is never flattered for operators
    let scale = a_norm.unwrap_or_else(|| matrix_norm2(&h).unwrap());
    let w = dec.basis_matrix(m + 1);
    let gram = w.transpose().matmul(&w).sub(&DenseMatrix::identity(m + 1));
    let zeros_exact = (0..=m).all(|i| (0..m).all(|j| i <= j + 1 || h[(i, j)] == 0.0));
    let bn = norm(b);
    let first_column = dec.basis()[0].iter().zip(b).map(|(w, b)| (w - b / bn).abs()).fold(0.0, f64::max);
    ArnoldiReport { residual: worst / scale, orthogonality: gram.max_abs(), zeros_exact, first_column }
}

#[test]
fn criterion_06_arnoldi_invariants() {
    let mut v = Verdict::new(6);
    let mut record = |name: &str, variant: &str, r: &ArnoldiReport, check_orth: bool| {
        v.check(format!("{name} {variant} residual {:.1e} ≤ 1e-10", r.residual), r.residual <= 1e-10);
        if check_orth {
            v.check(format!("{name} {variant} orthogonality {:.1e} ≤ 1e-12", r.orthogonality), r.orthogonality <= 1e-12);
        }
        v.check(format!("{name} {variant} Hessenberg zeros"), r.zeros_exact);
        v.check(format!("{name} {variant} first column {:.1e}", r.first_column), r.first_column <= 1e-15);
    };
    for (name, disc) in [
        ("i_laplace_1", i_laplace(100, LaplaceExample::Exp).unwrap()),
        ("i_laplace_2", i_laplace(100, LaplaceExample::T2Exp).unwrap()),
        ("baart", baart(200).unwrap()),
        ("heat", heat(200).unwrap()),
    ] {
        let p = TestProblem::new(disc, 1e-2, 1).unwrap();
        let a_norm = matrix_norm2(&p.a).unwrap();
        record(name, "mgs", &arnoldi_report(&p.a, &p.b, 40, ArnoldiOptions::mgs(), Some(a_norm)), false);
        record(name, "householder", &arnoldi_report(&p.a, &p.b, 40, ArnoldiOptions::householder(), Some(a_norm)), true);
    }
    for (name, psf, bc) in [
        ("deblur_gaussian", psf_gaussian_aniso(4.0, 1.3, 2.0, 11).unwrap(), BoundaryCondition::Antireflective),
        ("deblur_motion", psf_motion(17, 17).unwrap(), BoundaryCondition::Antireflective),
        ("deblur_wide", psf_gaussian_aniso(6.0, 6.0, 0.0, 31).unwrap(), BoundaryCondition::Reflective),
    ] {
        let margin = psf.reach();
        let p = BlurredImageProblem::new(&phantom(64 + 2 * margin), psf, bc, 1e-2, 1).unwrap();
        record(name, "mgs", &arnoldi_report(&p.op, &p.b, 40, ArnoldiOptions::mgs(), None), false);
        record(name, "householder", &arnoldi_report(&p.op, &p.b, 40, ArnoldiOptions::householder(), None), true);
    }
    let mut rng = NoiseRng::new(6);
    let (mut res, mut orth, mut zeros, mut first) = (0.0f64, 0.0f64, true, 0.0f64);
    for _ in 0..50 {
        let g = rng.normal_vector(900);
        let a = DenseMatrix::from_row_major(30, 30, g).unwrap();
        let b = rng.normal_vector(30);
        let a_norm = matrix_norm2(&a).unwrap();
        for (opts, hh) in [(ArnoldiOptions::mgs(), false), (ArnoldiOptions::householder(), true)] {
            let r = arnoldi_report(&a, &b, 25, opts, Some(a_norm));
            res = res.max(r.residual);
            if hh {
                orth = orth.max(r.orthogonality);
            }
            zeros &= r.zeros_exact;
            first = first.max(r.first_column);
        }
    }
    record("50 random 30×30", "both", &ArnoldiReport { residual: res, orthogonality: orth, zeros_exact: zeros, first_column: first }, true);
    v.finish();
}

#[test]
fn criterion_07_surrogate_product_is_spsd_of_rank_m() {
    let mut v = Verdict::new(7);
    let mut rng = NoiseRng::new(7);
    for (n, m) in [(10, 3), (20, 5), (30, 9), (40, 15), (50, 20), (50, 35)] {
        let a = DenseMatrix::from_row_major(n, n, rng.normal_vector(n * n)).unwrap();
        let dec = arnoldi_expand(&a, &rng.normal_vector(n), m, ArnoldiOptions::householder()).unwrap();
        let pre = TfPreconditioner::new(dec).unwrap();
        let ap = to_na(&a) * to_na(&pre.materialize());
        let scale = ap.norm();
        let asym = (&ap - ap.transpose()).amax() / scale;
        let eig = ((&ap + ap.transpose()) * 0.5).symmetric_eigen().eigenvalues;
        let min_eig = eig.min() / scale;
        let rank = ap.rank(1e-10 * scale);
        v.check(format!("N={n} m={m}: asymmetry {asym:.1e}, min eigenvalue {min_eig:.1e}, rank {rank}"), asym <= 1e-12 && min_eig >= -1e-12 && rank == m);
    }
    v.finish();
}

#[test]
fn criterion_08_gmres_residual_is_optimal() {
    let mut v = Verdict::new(8);
    let check = |v: &mut Verdict, name: &str, op: &dyn LinearOperator, b: &[f64]| {
        let bn = norm(b);
        let mut worst = f64::NEG_INFINITY;
        for m in [5, 10, 20] {
            let g = gmres(op, b, &SolverOptions::new(m), None).unwrap();
            let rg = residual(op, &g.stop_solution, b);
            let cfg = TfConfig { first_stop: FirstStop::Fixed(m), eps_hat: None, ..TfConfig::default() };
            let tf = tf_solve(op, b, &cfg, None).unwrap();
            for k in 0..=tf.iterations() {
                worst = worst.max((rg - residual(op, &tf.solution(k).unwrap(), b)) / bn);
            }
        }
        v.check(format!("{name}: max excess {worst:.1e} ≤ 1e-10"), worst <= 1e-10);
    };
    for (name, disc) in [
        ("i_laplace_1", i_laplace(100, LaplaceExample::Exp).unwrap()),
        ("i_laplace_2", i_laplace(100, LaplaceExample::T2Exp).unwrap()),
        ("baart", baart(200).unwrap()),
        ("heat", heat(200).unwrap()),
    ] {
        let p = TestProblem::new(disc, 1e-2, 1).unwrap();
        check(&mut v, name, &p.a, &p.b);
    }
    for (name, psf, bc) in [
        ("deblur_gaussian", psf_gaussian_aniso(4.0, 1.3, 2.0, 11).unwrap(), BoundaryCondition::Antireflective),
        ("deblur_motion", psf_motion(17, 17).unwrap(), BoundaryCondition::Antireflective),
        ("deblur_wide", psf_gaussian_aniso(6.0, 6.0, 0.0, 31).unwrap(), BoundaryCondition::Reflective),
    ] {
        let margin = psf.reach();
        let p = BlurredImageProblem::new(&phantom(64 + 2 * margin), psf, bc, 2e-2, 1).unwrap();
        check(&mut v, name, &p.op, &p.b);
    }
    v.finish();
}

/// Max over `k ≤ m` of `‖H_mᵀ t_k − s_k‖ / ‖s_k‖`, with `t_k` the MINRES
/// iterates on `H_m H_mᵀ t = β e₁` and `s_k` the CGLS iterates on
/// `H_m s = β e₁`, plus the number of `k` compared.
fn hybrid_gap(a: &DenseMatrix, b: &[f64], m: usize) -> (f64, usize) {
    let cfg = TfConfig { first_stop: FirstStop::Fixed(m), eps_hat: None, ..TfConfig::default() };
    let tf = tf_solve(a, b, &cfg, None).unwrap();
    let h = tf.decomposition.hessenberg();
    let mut rhs = vec![0.0; m + 1];
    rhs[0] = tf.decomposition.beta();
    let explicit = cgls(&h, &rhs, &SolverOptions::new(m).keeping_iterates(), None).unwrap();
    let s = explicit.iterates.unwrap();
    let count = s.len().min(tf.per_k.len());
    let mut worst = 0.0f64;
    for k in 1..count {
        let z = h.matvec_t(&tf.per_k[k].t);
        worst = worst.max(diff_norm(&z, &s[k]) / norm(&s[k]));
    }
    (worst, count - 1)
}

#[test]
fn criterion_09_hybrid_equivalence() {
    let mut v = Verdict::new(9);
    let mut rng = NoiseRng::new(9);
    for (n, m) in [(20, 8), (40, 12), (60, 15), (100, 20)] {
        let g = rng.normal_vector(n * n);
        let s = 0.5 / (n as f64).sqrt();
        let a = DenseMatrix::from_fn(n, n, |i, j| s * g[i * n + j] + if i == j { 2.0 } else { 0.0 });
        let (gap, count) = hybrid_gap(&a, &rng.normal_vector(n), m);
        v.check(format!("N={n} m={m}: gap {gap:.1e} over k ≤ {count}"), gap <= 1e-9 && count == m);
    }
    // gap grows like ε·κ(H_m)² near k = m on ill-conditioned problems
    let p = TestProblem::new(i_laplace(100, LaplaceExample::Exp).unwrap(), 1e-2, 1).unwrap();
    for m in [4, 8] {
        let (gap, count) = hybrid_gap(&p.a, &p.b, m);
        v.info(format!("i_laplace_1(100) m={m}: gap {gap:.1e} over k ≤ {count}"));
    }
    v.finish();
}

#[test]
fn criterion_10_projected_equivalence_on_consistent_instances() {
    let mut v = Verdict::new(10);
    let mut rng = NoiseRng::new(10);
    let mut holds = 0;
    for i in 0..25 {
        let n = 10 + i % 5 * 5;
        let m = 3 + i % 6;
        let g = rng.normal_vector(n * n);
        let q = DMatrix::from_fn(n, n, |r, c| 0.3 * g[r * n + c] / (n as f64).sqrt() + if r == c { 1.0 } else { 0.0 });
        let d = DMatrix::from_diagonal(&DVector::from_fn(n, |r, _| 1.0 + 0.37 * r as f64));
        let a = &q * d * q.clone().try_inverse().unwrap();
        let c = DVector::from_fn(n, |r, _| if r < m { 1.0 + 0.1 * r as f64 } else { 0.0 });
        let b = &q * c;
        let a = DenseMatrix::from_fn(n, n, |r, c| a[(r, c)]);
        let dec = arnoldi_expand(&a, b.as_slice(), m, ArnoldiOptions::householder()).unwrap();
        match verify_projected_equivalence(&a, &dec).unwrap() {
            ProjectedEquivalence::Holds => holds += 1,
            other => v.info(format!("instance {i} (N={n}, m={m}): {other:?}")),
        }
    }
    v.check(format!("{holds}/25 instances hold"), holds == 25);
    v.finish();
}

#[test]
fn criterion_11_i_laplace_projection_diagnostics() {
    let mut v = Verdict::new(11);
    let p = TestProblem::new(i_laplace(100, LaplaceExample::Exp).unwrap(), 1e-2, 1).unwrap();
    let bn = norm(&p.b);
    let hh = ArnoldiOptions { breakdown_tol: FIRST_CYCLE_BREAKDOWN_TOL, ..ArnoldiOptions::householder() };

    let mut worst_res = 0.0f64;
    for m in [5, 10, 20, 30, 40] {
        let cfg = TfConfig { first_stop: FirstStop::Fixed(m), eps_hat: None, arnoldi: hh, ..TfConfig::default() };
        let tf = tf_solve(&p.a, &p.b, &cfg, None).unwrap();
        for k in 0..=tf.iterations() {
            let explicit = residual(&p.a, &tf.solution(k).unwrap(), &p.b);
            worst_res = worst_res.max((tf.per_k[k].reduced_residual - explicit).abs() / bn);
        }
    }
    v.check(format!("reduced residual identity {worst_res:.1e} ≤ 1e-8"), worst_res <= 1e-8);

    let dec = arnoldi_expand(&p.a, &p.b, 40, hh).unwrap();
    let m_max = dec.steps();
    let sigma_a = to_na(&p.a).singular_values();
    let mut sigma_a: Vec<f64> = sigma_a.iter().copied().collect();
    sigma_a.sort_by(|x, y| y.total_cmp(x));
    let diag = zeta_diagnostics(&p.a, &dec).unwrap();
    let s1 = &diag.sigma1_per_m;
    let monotone = s1.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    let bounded = s1.iter().all(|&s| s <= sigma_a[0] * (1.0 + 1e-12));
    v.check(format!("σ₁(H_m) nondecreasing for m ≤ {m_max}"), monotone);
    v.check(format!("σ₁(H_m) ≤ σ₁(A) = {:.4}", sigma_a[0]), bounded);

    let mut worst_log = f64::NEG_INFINITY;
    let mut worst_at = 0;
    for m in 1..=m_max {
        let lhs = dec.log_subdiagonal_product(m);
        let rhs: f64 = sigma_a[..m].iter().map(|s| s.ln()).sum();
        if lhs - rhs > worst_log {
            worst_log = lhs - rhs;
            worst_at = m;
        }
    }
    v.check(format!("log ∏h − log ∏σ max {worst_log:.2e} at m={worst_at} ≤ 1e-10"), worst_log <= 1e-10);

    let zeta = diag.zeta_exact.as_ref().unwrap();
    let bound = diag.zeta_bound.as_ref().unwrap();
    let a2 = sigma_a[0] * sigma_a[0];
    let excess = zeta.iter().zip(bound).map(|(z, b)| (z - b) / a2).fold(f64::NEG_INFINITY, f64::max);
    let violated: Vec<String> = zeta
        .iter()
        .zip(bound)
        .enumerate()
        .filter(|(_, (z, b))| z > b)
        .map(|(i, (z, b))| format!("m={} ζ={z:.3e} bound={b:.3e} σ₁(H_m)={:.4}", i + 1, s1[i]))
        .collect();
    if !violated.is_empty() {
        v.info(format!("ζ_m above the σ₁(H_m) bound at {}", violated.join(", ")));
    }
    v.check(format!("ζ_m − bound max {excess:.1e}·‖A‖² ≤ 1e-12 for m ≤ {m_max}"), excess <= 1e-12);
    v.finish();
}

#[test]
fn criterion_12_full_projection_matches_cgls() {
    let mut v = Verdict::new(12);
    let mut rng = NoiseRng::new(12);
    for i in 0..10 {
        let n = 11 + i;
        let g = rng.normal_vector(n * n);
        let s = 0.5 / (n as f64).sqrt();
        let a = DenseMatrix::from_fn(n, n, |r, c| s * g[r * n + c] + if r == c { 2.0 } else { 0.0 });
        let b = rng.normal_vector(n);
        let cfg = TfConfig {
            first_stop: FirstStop::Fixed(n),
            eps_hat: None,
            arnoldi: ArnoldiOptions { breakdown_tol: FIRST_CYCLE_BREAKDOWN_TOL, ..ArnoldiOptions::householder() },
            ..TfConfig::default()
        };
        let tf = tf_solve(&a, &b, &cfg, None).unwrap();
        let reference = cgls(&a, &b, &SolverOptions::new(n).keeping_iterates(), None).unwrap();
        let xs = reference.iterates.unwrap();
        let count = xs.len().min(tf.per_k.len());
        let mut worst = 0.0f64;
        for k in 1..count {
            worst = worst.max(diff_norm(&tf.solution(k).unwrap(), &xs[k]) / norm(&xs[k]));
        }
        v.check(format!("N={n}: m={} gap {worst:.1e} over k ≤ {}", tf.m_used, count - 1), tf.m_used == n && worst <= 1e-7 && count > 5);
    }
    v.finish();
}

/// Reflected index of `t` on `0..n` with weights, by boundary rule.
fn extend(bc: BoundaryCondition, n: i64, t: i64) -> Vec<(i64, f64)> {
    if (0..n).contains(&t) {
        return vec![(t, 1.0)];
    }
    match bc {
        BoundaryCondition::Zero => vec![],
        BoundaryCondition::Periodic => vec![(t.rem_euclid(n), 1.0)],
        BoundaryCondition::Reflective => vec![(if t < 0 { -1 - t } else { 2 * n - 1 - t }, 1.0)],
        BoundaryCondition::Antireflective => {
            if t < 0 {
                vec![(0, 2.0), (-t, -1.0)]
            } else {
                vec![(n - 1, 2.0), (2 * (n - 1) - t, -1.0)]
            }
        }
    }
}

fn blur_matrix(psf: &Psf, bc: BoundaryCondition, n: usize) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(n * n, n * n);
    let (k, l) = psf.center();
    let ni = n as i64;
    for r in 0..n {
        for c in 0..n {
            for pa in 0..psf.size() {
                for pb in 0..psf.size() {
                    let p = psf.get(pa, pb);
                    for (ii, wi) in extend(bc, ni, r as i64 + k as i64 - pa as i64) {
                        for (jj, wj) in extend(bc, ni, c as i64 + l as i64 - pb as i64) {
                            a[(c * n + r, jj as usize * n + ii as usize)] += p * wi * wj;
                        }
                    }
                }
            }
        }
    }
    a
}

#[test]
fn criterion_13_deblurring_ordering() {
    let mut v = Verdict::new(13);
    let mut cfg = ExperimentConfig::new(
        Problem::DeblurGaussian,
        vec![1, 2, 3],
        vec![SolverKind::Gmres, SolverKind::TfCgls, SolverKind::RpGmres],
    )
    .unwrap();
    cfg.tf.m_max = 30;
    assert_eq!((cfg.n, cfg.psf_size, cfg.eps_hat, cfg.boundary), (64, 11, 2e-2, BoundaryCondition::Antireflective));
    let out = run_experiment(&cfg).unwrap();
    let g = summary_of(&out, SolverKind::Gmres).rel_err_best;
    let t = summary_of(&out, SolverKind::TfCgls).rel_err_best;
    let r = summary_of(&out, SolverKind::RpGmres).rel_err_best;
    v.check(format!("TF-CGLS best {t:.4} < GMRES best {g:.4}"), t < g);
    v.check(format!("RP-GMRES best {r:.4} < GMRES best {g:.4}"), r < g);

    let psf = psf_gaussian_aniso(4.0, 1.3, 2.0, 11).unwrap();
    for bc in [BoundaryCondition::Zero, BoundaryCondition::Periodic, BoundaryCondition::Reflective, BoundaryCondition::Antireflective] {
        let op = BlurOperator::new(psf.clone(), bc, 16).unwrap();
        let diff = DenseMatrix::from_operator(&op).sub(&blur_matrix(&psf, bc, 16)).max_abs();
        v.check(format!("{bc:?} 16×16 materialization {diff:.1e} ≤ 1e-12"), diff <= 1e-12);
    }
    v.finish();
}
