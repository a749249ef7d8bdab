//! One-sided (Hestenes) Jacobi SVD for the small dense matrices met here.

use alloc::vec;
use alloc::vec::Vec;
use libm::sqrt;

use super::dense::DenseMatrix;
use super::vector::{axpy, dot, norm2};
use crate::error::{Error, Result};

/// Rotations with `|gᵢ·gⱼ| ≤ TOL ‖gᵢ‖‖gⱼ‖` are skipped.
const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 80;

/// Economy-size SVD `M = U diag(sigma) Vᵀ` with `sigma` nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactorization {
    /// `rows × k`, orthonormal columns.
    pub u: DenseMatrix,
    /// Length `k = min(rows, cols)`.
    pub sigma: Vec<f64>,
    /// `cols × k`, orthonormal columns.
    pub v: DenseMatrix,
}

impl SvdFactorization {
    /// Number of singular values above `rel_tol · σ₁`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let s1 = self.sigma.first().copied().unwrap_or(0.0);
        self.sigma.iter().filter(|&&s| s > rel_tol * s1).count()
    }

    /// `Σ_{i<count} vᵢ (uᵢᵀ b) / σᵢ`, skipping zero singular values.
    pub fn truncated_solve(&self, b: &[f64], count: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.v.rows()];
        for i in 0..count.min(self.sigma.len()) {
            let s = self.sigma[i];
            if s == 0.0 {
                continue;
            }
            let coef: f64 =
                (0..self.u.rows()).map(|r| self.u[(r, i)] * b[r]).sum::<f64>() / s;
            for r in 0..self.v.rows() {
                x[r] += coef * self.v[(r, i)];
            }
        }
        x
    }

    /// Minimum-norm least-squares solution with the usual
    /// `max(rows, cols) · ε · σ₁` rank cut.
    pub fn pinv_solve(&self, b: &[f64]) -> Vec<f64> {
        let tol = self.u.rows().max(self.v.rows()) as f64 * f64::EPSILON;
        self.truncated_solve(b, self.rank(tol))
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        let k = self.sigma.len();
        let us = DenseMatrix::from_fn(self.u.rows(), k, |i, j| self.u[(i, j)] * self.sigma[j]);
        us.matmul(&self.v.transpose())
    }
}

/// Orthogonalizes `cols` in place; returns the accumulated right rotations
/// when `want_v`.
fn jacobi_columns(cols: &mut [Vec<f64>], want_v: bool) -> Option<Vec<Vec<f64>>> {
    let n = cols.len();
    let mut v: Option<Vec<Vec<f64>>> = want_v.then(|| {
        (0..n)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                e
            })
            .collect()
    });
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= JACOBI_TOL * (sqrt(alpha) * sqrt(beta)) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + sqrt(1.0 + zeta * zeta));
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = c * t;
                rotate(cols, p, q, c, s);
                if let Some(v) = v.as_mut() {
                    rotate(v, p, q, c, s);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    v
}

#[inline]
fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Extends `basis` (orthonormal, possibly with `None` holes) to a full
/// orthonormal set by Gram–Schmidt on canonical vectors.
fn complete_basis(dim: usize, basis: &mut [Option<Vec<f64>>]) {
    let mut candidate = 0;
    for slot in 0..basis.len() {
        if basis[slot].is_some() {
            continue;
        }
        while candidate < dim {
            let mut e = vec![0.0; dim];
            e[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for b in basis.iter().flatten() {
                    let c = dot(b, &e);
                    axpy(-c, b, &mut e);
                }
            }
            let nrm = norm2(&e);
            if nrm > 1e-8 {
                e.iter_mut().for_each(|x| *x /= nrm);
                basis[slot] = Some(e);
                break;
            }
        }
    }
}

fn svd_tall(m: &DenseMatrix) -> SvdFactorization {
    let (rows, cols) = (m.rows(), m.cols());
    let mut g = m.columns();
    let v = jacobi_columns(&mut g, true).unwrap_or_default();

    let norms: Vec<f64> = g.iter().map(|c| norm2(c)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap_or(core::cmp::Ordering::Equal));

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut u_cols: Vec<Option<Vec<f64>>> = order
        .iter()
        .map(|&j| {
            let s = norms[j];
            (s > 0.0 && s.is_finite()).then(|| g[j].iter().map(|x| x / s).collect())
        })
        .collect();
    complete_basis(rows, &mut u_cols);
    let u_cols: Vec<Vec<f64>> = u_cols.into_iter().map(|c| c.unwrap_or_else(|| vec![0.0; rows])).collect();
    let v_cols: Vec<Vec<f64>> = order.iter().map(|&j| v[j].clone()).collect();

    SvdFactorization {
        u: DenseMatrix::from_columns(&u_cols),
        sigma,
        v: DenseMatrix::from_columns(&v_cols),
    }
}

/// Economy SVD by one-sided Jacobi sweeps in a fixed cyclic order.
pub fn dense_svd(m: &DenseMatrix) -> Result<SvdFactorization> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.rows() >= m.cols() {
        Ok(svd_tall(m))
    } else {
        let t = svd_tall(&m.transpose());
        Ok(SvdFactorization { u: t.v, sigma: t.sigma, v: t.u })
    }
}

/// Singular values only, nonincreasing.
pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let src = if m.rows() >= m.cols() { m.clone() } else { m.transpose() };
    let mut g = src.columns();
    jacobi_columns(&mut g, false);
    let mut s: Vec<f64> = g.iter().map(|c| norm2(c)).collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    Ok(s)
}

/// Matrix 2-norm, i.e. the largest singular value.
pub fn matrix_norm2(m: &DenseMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Truncated-SVD solution `V_m Σ_m⁻¹ U_mᵀ b`.
pub fn tsvd_solve(a: &DenseMatrix, b: &[f64], m: usize) -> Result<Vec<f64>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: b.len() });
    }
    if m == 0 || m > a.rows().min(a.cols()) {
        return Err(Error::InvalidArgument("truncation index outside 1..=min(rows, cols)"));
    }
    let svd = dense_svd(a)?;
    if svd.sigma[m - 1] == 0.0 {
        return Err(Error::RankDeficient { index: m });
    }
    Ok(svd.truncated_solve(b, m))
}
