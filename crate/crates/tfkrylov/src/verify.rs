//! Generator conformance values and the invariant suite behind `verify`.

use tfkrylov_core::krylov::{gmres, SolverOptions};
use tfkrylov_core::linalg::singular_values;
use tfkrylov_core::problems::{asymmetry_ratio, NoiseRng, TestProblem, HEAT_RANK_THRESHOLD};
use tfkrylov_core::tfcg::{tf_solve, verify_projected_equivalence, FirstStop, ProjectedEquivalence, TfConfig, TfPreconditioner};
use tfkrylov_core::{arnoldi_expand, matrix_norm2, norm2, ArnoldiOptions, DenseMatrix};

use crate::config::Problem;
use crate::error::HarnessError;
use crate::experiment::discretization;

/// Published asymmetry ratio `‖A − Aᵀ‖/‖A‖` of a generator at its reference
/// size, with the accepted tolerance and, for `heat`, the numerical rank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub n: usize,
    pub asymmetry: f64,
    pub tol: f64,
    pub rank: Option<usize>,
}

pub fn reference(problem: Problem) -> Option<Reference> {
    match problem {
        Problem::ILaplace1 | Problem::ILaplace2 => Some(Reference { n: 100, asymmetry: 0.7456, tol: 0.002, rank: None }),
        Problem::Baart => Some(Reference { n: 200, asymmetry: 0.60345, tol: 0.002, rank: None }),
        Problem::Heat => Some(Reference { n: 200, asymmetry: 1.1244, tol: 0.005, rank: Some(195) }),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conformance {
    pub problem: Problem,
    pub reference: Reference,
    pub asymmetry: f64,
    pub rank: Option<usize>,
}

impl Conformance {
    pub fn passed(&self) -> bool {
        (self.asymmetry - self.reference.asymmetry).abs() <= self.reference.tol && self.rank == self.reference.rank
    }
}

/// Number of singular values above `HEAT_RANK_THRESHOLD · σ₁`.
pub fn numerical_rank(a: &DenseMatrix) -> Result<usize, HarnessError> {
    let s = singular_values(a)?;
    let cut = HEAT_RANK_THRESHOLD * s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&v| v > cut).count())
}

/// Measures the generator against its reference values; `None` when the
/// problem has none or `n` differs from the reference size.
pub fn generator_conformance(problem: Problem, n: usize) -> Result<Option<Conformance>, HarnessError> {
    let Some(reference) = reference(problem).filter(|r| r.n == n) else {
        return Ok(None);
    };
    let a = discretization(problem, n)?.a;
    let asymmetry = asymmetry_ratio(&a)?;
    let rank = if reference.rank.is_some() { Some(numerical_rank(&a)?) } else { None };
    Ok(Some(Conformance { problem, reference, asymmetry, rank }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: impl Into<String>, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name: name.into(), passed, detail }
}

fn random_matrix(rng: &mut NoiseRng, n: usize, shift: f64) -> DenseMatrix {
    let v = rng.normal_vector(n * n);
    DenseMatrix::from_fn(n, n, |i, j| v[i * n + j] / (n as f64).sqrt() + if i == j { shift } else { 0.0 })
}

fn residual_norm(a: &DenseMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.matvec(x);
    norm2(&ax.iter().zip(b).map(|(p, q)| p - q).collect::<Vec<_>>())
}

fn check_generators() -> Result<Vec<CheckOutcome>, HarnessError> {
    let mut out = Vec::new();
    for p in [Problem::ILaplace1, Problem::Baart, Problem::Heat] {
        let r = reference(p).expect("dense problems have references");
        let c = generator_conformance(p, r.n)?.expect("reference size");
        let rank = c.rank.map(|k| format!(", rank {k}")).unwrap_or_default();
        out.push(outcome(
            format!("generator {}({})", p.tag(), r.n),
            c.passed(),
            format!("asymmetry {:.5} (reference {} ± {}){rank}", c.asymmetry, r.asymmetry, r.tol),
        ));
    }
    Ok(out)
}

fn check_arnoldi(rng: &mut NoiseRng) -> Result<CheckOutcome, HarnessError> {
    let (mut worst_res, mut worst_orth) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let a = random_matrix(rng, 30, 0.0);
        let b = rng.normal_vector(30);
        for opts in [ArnoldiOptions::mgs(), ArnoldiOptions::householder()] {
            let dec = arnoldi_expand(&a, &b, 15, opts)?;
            let m = dec.steps();
            let w = dec.basis_matrix(m + 1);
            let lhs = a.matmul(&dec.basis_matrix(m));
            let rhs = w.matmul(&dec.hessenberg());
            worst_res = worst_res.max(matrix_norm2(&lhs.sub(&rhs))? / matrix_norm2(&a)?);
            if opts == ArnoldiOptions::householder() {
                let gram = w.transpose().matmul(&w).sub(&DenseMatrix::identity(m + 1));
                worst_orth = worst_orth.max(gram.max_abs());
            }
        }
    }
    Ok(outcome(
        "Arnoldi decomposition and Householder orthogonality",
        worst_res <= 1e-10 && worst_orth <= 1e-12,
        format!("residual {worst_res:.1e}, orthogonality {worst_orth:.1e}"),
    ))
}

fn check_surrogate(rng: &mut NoiseRng) -> Result<CheckOutcome, HarnessError> {
    let mut worst_sym = 0.0f64;
    let mut min_quad = f64::INFINITY;
    let mut ranks_ok = true;
    for (n, m) in [(20, 5), (35, 12), (50, 20)] {
        let a = random_matrix(rng, n, 0.0);
        let dec = arnoldi_expand(&a, &rng.normal_vector(n), m, ArnoldiOptions::householder())?;
        let pre = TfPreconditioner::new(dec)?;
        let ap = a.matmul(&pre.materialize());
        let scale = matrix_norm2(&ap)?;
        worst_sym = worst_sym.max(ap.sub(&ap.transpose()).max_abs() / scale);
        for _ in 0..10 {
            let x = rng.normal_vector(n);
            let q: f64 = x.iter().zip(ap.matvec(&x)).map(|(p, q)| p * q).sum();
            min_quad = min_quad.min(q / (scale * norm2(&x).powi(2)));
        }
        let s = singular_values(&ap)?;
        ranks_ok &= s.iter().filter(|&&v| v > 1e-10 * scale).count() == m;
    }
    Ok(outcome(
        "A·A' symmetric positive semidefinite of rank m",
        worst_sym <= 1e-10 && min_quad >= -1e-10 && ranks_ok,
        format!("asymmetry {worst_sym:.1e}, min Rayleigh quotient {min_quad:.1e}, ranks ok: {ranks_ok}"),
    ))
}

fn check_gmres_optimality() -> Result<CheckOutcome, HarnessError> {
    let mut worst = f64::NEG_INFINITY;
    for p in [Problem::ILaplace1, Problem::ILaplace2, Problem::Baart, Problem::Heat] {
        let n = reference(p).expect("dense").n;
        let tp = TestProblem::new(discretization(p, n)?, 1e-2, 1)?;
        let b_norm = norm2(&tp.b);
        for m in [5, 10, 20] {
            let g = gmres(&tp.a, &tp.b, &SolverOptions::new(m), None)?;
            let g_res = residual_norm(&tp.a, &g.stop_solution, &tp.b);
            let cfg = TfConfig { first_stop: FirstStop::Fixed(m), eps_hat: None, ..TfConfig::default() };
            let tf = tf_solve(&tp.a, &tp.b, &cfg, None)?;
            for k in 0..=tf.iterations() {
                let r = residual_norm(&tp.a, &tf.solution(k)?, &tp.b);
                worst = worst.max((g_res - r) / b_norm);
            }
        }
    }
    Ok(outcome(
        "GMRES residual bounds every transpose-free iterate",
        worst <= 1e-10,
        format!("max (‖r_gmres‖ − ‖r_tf‖)/‖b‖ = {worst:.1e}"),
    ))
}

/// `[[B, X], [0, C]]` with `b` supported on the first `m` coordinates, so the
/// Krylov space is invariant after `m` steps.
fn consistent_instance(rng: &mut NoiseRng, n: usize, m: usize) -> (DenseMatrix, Vec<f64>) {
    let full = random_matrix(rng, n, 2.0);
    let a = DenseMatrix::from_fn(n, n, |i, j| if i >= m && j < m { 0.0 } else { full[(i, j)] });
    let mut b = rng.normal_vector(n);
    b[m..].iter_mut().for_each(|v| *v = 0.0);
    (a, b)
}

fn check_projected_equivalence(rng: &mut NoiseRng) -> Result<CheckOutcome, HarnessError> {
    let mut holds = 0;
    let mut failures = Vec::new();
    let total = 25;
    for i in 0..total {
        let n = 12 + i % 4 * 6;
        let m = 3 + i % 5;
        let (a, b) = consistent_instance(rng, n, m);
        let dec = arnoldi_expand(&a, &b, m, ArnoldiOptions::householder())?;
        match verify_projected_equivalence(&a, &dec)? {
            ProjectedEquivalence::Holds => holds += 1,
            other => failures.push(format!("#{i}: {other:?}")),
        }
    }
    Ok(outcome(
        "projected solution solves consistent systems",
        holds == total,
        format!("{holds}/{total} hold {}", failures.join("; ")),
    ))
}

/// Runs every invariant check; the suite passes when every outcome does.
pub fn run_invariant_suite(seed: u64) -> Result<Vec<CheckOutcome>, HarnessError> {
    let mut rng = NoiseRng::new(seed);
    let mut out = check_generators()?;
    out.push(check_arnoldi(&mut rng)?);
    out.push(check_surrogate(&mut rng)?);
    out.push(check_gmres_optimality()?);
    out.push(check_projected_equivalence(&mut rng)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn off_reference_sizes_are_not_checked() {
        assert_eq!(generator_conformance(Problem::Baart, 64).unwrap(), None);
        assert_eq!(generator_conformance(Problem::DeblurWide, 64).unwrap(), None);
    }

    #[test]
    fn consistent_instance_keeps_the_leading_block_invariant() {
        let mut rng = NoiseRng::new(5);
        let (a, b) = consistent_instance(&mut rng, 12, 4);
        let ab = a.matvec(&b);
        assert!(ab[4..].iter().all(|&v| v == 0.0));
    }
}
