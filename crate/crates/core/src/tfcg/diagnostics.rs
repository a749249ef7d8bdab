use alloc::vec;
use alloc::vec::Vec;

use super::stopping::StoppingDiagnostics;
use crate::arnoldi::{arnoldi_expand, ArnoldiDecomposition, ArnoldiOptions};
use crate::error::{Error, Result};
use crate::krylov::minres_spd;
use crate::linalg::vector::{norm2, sub};
use crate::linalg::{dense_svd, matrix_norm2, DenseMatrix};

/// Fills `zeta_exact` and `zeta_bound` for every step of `dec` using the
/// dense matrix `a`.
pub fn zeta_diagnostics(a: &DenseMatrix, dec: &ArnoldiDecomposition) -> Result<StoppingDiagnostics> {
    let n = a.rows();
    if a.cols() != n || dec.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: dec.dim() });
    }
    let mut diag = StoppingDiagnostics::from_decomposition(dec)?;
    let ata = a.transpose().matmul(a);
    let h_full = dec.hessenberg();
    let mut zeta = Vec::with_capacity(dec.steps());
    let mut bound = Vec::with_capacity(dec.steps());
    for m in 1..=dec.steps() {
        let w = dec.basis_matrix(m);
        let projected = w.matmul(&w.transpose().matmul(&ata));
        zeta.push(matrix_norm2(&ata.sub(&projected))?);
        let h = h_full.submatrix(m + 1, m);
        let approx = dec.basis_matrix(m + 1).matmul(&h).matmul(&w.transpose());
        bound.push(diag.sigma1_per_m[m - 1] * matrix_norm2(&a.sub(&approx))?);
    }
    diag.zeta_exact = Some(zeta);
    diag.zeta_bound = Some(bound);
    Ok(diag)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterKind {
    /// `k` MINRES steps on the projected system.
    TfCgls,
    /// Truncation of the SVD of `H_m` after `k` terms.
    HybridTsvd,
}

/// Filter factors `Φ_ii` of the `k`-th regularized solution relative to the
/// SVD `H_m = U Σ Vᵀ`. `None` marks components whose data coefficient
/// `(Uᵀ ‖b‖ e₁)_i` is below `1e-13 ‖b‖`, where the ratio is meaningless.
pub fn filter_factors(dec: &ArnoldiDecomposition, k: usize, kind: FilterKind) -> Result<Vec<Option<f64>>> {
    let m = dec.steps();
    if k > m {
        return Err(Error::IndexOutOfRange { index: k, max: m });
    }
    if kind == FilterKind::HybridTsvd {
        return Ok((0..m).map(|i| Some(if i < k { 1.0 } else { 0.0 })).collect());
    }
    let h = dec.hessenberg();
    let beta = dec.beta();
    let s_k = if k == 0 {
        vec![0.0; m]
    } else {
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let solve = minres_spd(&h.gram_outer(), &g, k)?;
        let t = &solve.iterates.last().ok_or(Error::ZeroVector)?.t;
        h.matvec_t(t)
    };
    let svd = dense_svd(&h)?;
    let vs = svd.v.matvec_t(&s_k);
    Ok((0..m)
        .map(|i| {
            let coef = beta * svd.u[(0, i)];
            (coef.abs() >= 1e-13 * beta).then(|| svd.sigma[i] * vs[i] / coef)
        })
        .collect())
}

/// Bases expressed in the right singular vectors `V` of `A`: each column is
/// `Vᵀ ŵ` for one basis vector `ŵ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    /// Arnoldi basis `W_{m_small}`.
    pub gmres: DenseMatrix,
    /// `W_{m_large} V_H[:, ..k]` with `V_H` the right singular vectors of `H_{m_large}`.
    pub tf: DenseMatrix,
    /// Householder–Arnoldi basis of `K_k(AᵀA, Aᵀb)`.
    pub cgls: DenseMatrix,
}

pub fn svd_mixing_report(
    a: &DenseMatrix,
    b: &[f64],
    m_small: usize,
    m_large: usize,
    k: usize,
) -> Result<MixingReport> {
    if k == 0 || k > m_large {
        return Err(Error::InvalidArgument("k must lie in 1..=m_large"));
    }
    let opts = ArnoldiOptions::householder();
    let v = dense_svd(a)?.v;
    let vt = v.transpose();

    let small = arnoldi_expand(a, b, m_small, opts)?;
    let gmres = vt.matmul(&small.basis_matrix(small.steps()));

    let large = arnoldi_expand(a, b, m_large, opts)?;
    let m = large.steps();
    let vh = dense_svd(&large.hessenberg())?.v;
    let k = k.min(m);
    let vh_k = DenseMatrix::from_fn(m, k, |i, j| vh[(i, j)]);
    let tf = vt.matmul(&large.basis_matrix(m).matmul(&vh_k));

    let ata = a.transpose().matmul(a);
    let atb = a.matvec_t(b);
    let normal = arnoldi_expand(&ata, &atb, k, opts)?;
    let cgls = vt.matmul(&normal.basis_matrix(normal.steps()));

    Ok(MixingReport { gmres, tf, cgls })
}

/// Outcome of [`verify_projected_equivalence`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectedEquivalence {
    Holds,
    /// One of the three checks failed; `measured` is its relative residual.
    Fails { check: &'static str, measured: f64 },
    /// `H_m s = ‖b‖ e₁` has no exact solution, so the statement does not apply.
    NotApplicable { consistency_residual: f64 },
}

/// Checks, for a consistent projected system, that `y = W_{m+1} t` with
/// `t = (H_m H_mᵀ)^† ‖b‖ e₁` is the minimum-norm solution of
/// `C_m C_mᵀ y = b` and that `x = A′_m y` solves `A x = b`.
pub fn verify_projected_equivalence(a: &DenseMatrix, dec: &ArnoldiDecomposition) -> Result<ProjectedEquivalence> {
    let n = a.rows();
    if a.cols() != n || dec.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: dec.dim() });
    }
    const TOL: f64 = 1e-8;
    let m = dec.steps();
    let beta = dec.beta();
    let h = dec.hessenberg();
    let mut rhs = vec![0.0; m + 1];
    rhs[0] = beta;

    let s = dense_svd(&h)?.pinv_solve(&rhs);
    let consistency_residual = norm2(&sub(&h.matvec(&s), &rhs)) / beta;
    if consistency_residual > 1e-10 {
        return Ok(ProjectedEquivalence::NotApplicable { consistency_residual });
    }

    let gram = h.gram_outer();
    let gram_svd = dense_svd(&gram)?;
    let t = gram_svd.pinv_solve(&rhs);
    let w = dec.basis_matrix(m + 1);
    let y = w.matvec(&t);
    let b: Vec<f64> = dec.basis()[0].iter().map(|v| v * beta).collect();

    let c = w.matmul(&h);
    let ccty = c.matvec(&c.matvec_t(&y));
    let r1 = norm2(&sub(&ccty, &b)) / beta;
    if !(r1 <= TOL) {
        return Ok(ProjectedEquivalence::Fails { check: "C_m C_m^T y = b", measured: r1 });
    }

    // Minimum norm: y has no component in null(C_m C_mᵀ). Within range(W)
    // that null space is W null(H_m H_mᵀ); outside it everything is null.
    let y_norm = norm2(&y).max(f64::MIN_POSITIVE);
    let cut = (m + 1) as f64 * f64::EPSILON * gram_svd.sigma[0];
    let mut null_part = 0.0;
    for (i, &sig) in gram_svd.sigma.iter().enumerate() {
        if sig <= cut {
            let coef: f64 = (0..=m).map(|r| gram_svd.v[(r, i)] * t[r]).sum();
            null_part += coef * coef;
        }
    }
    let outside = norm2(&sub(&y, &w.matvec(&w.matvec_t(&y))));
    let r2 = (libm::sqrt(null_part) + outside) / y_norm;
    if !(r2 <= TOL) {
        return Ok(ProjectedEquivalence::Fails { check: "y minimum norm", measured: r2 });
    }

    let x = super::recover_solution(dec, &t)?;
    let r3 = norm2(&sub(&a.matvec(&x), &b)) / beta;
    if !(r3 <= TOL) {
        return Ok(ProjectedEquivalence::Fails { check: "A x = b", measured: r3 });
    }
    Ok(ProjectedEquivalence::Holds)
}
