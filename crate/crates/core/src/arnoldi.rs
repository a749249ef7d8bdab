//! Arnoldi decomposition `A W_m = W_{m+1} H_m` by modified Gram–Schmidt or
//! Householder reflections.
//!
//! The decomposition is resumable: [`ArnoldiDecomposition::expand`] continues
//! from the current step without touching earlier columns, so a run to `m = 5`
//! followed by an extension to `m = 10` is bitwise identical to a direct run
//! to `m = 10`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::vector::{axpy, dot, norm2};
use crate::linalg::{DenseMatrix, LinearOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArnoldiVariant {
    ModifiedGramSchmidt,
    Householder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArnoldiOptions {
    pub variant: ArnoldiVariant,
    /// Breakdown when `h_{j+1,j} < breakdown_tol · ‖b‖`.
    pub breakdown_tol: f64,
    /// Second Gram–Schmidt pass (MGS only).
    pub reorthogonalize: bool,
}

impl Default for ArnoldiOptions {
    fn default() -> Self {
        Self {
            variant: ArnoldiVariant::ModifiedGramSchmidt,
            breakdown_tol: 1e-14,
            reorthogonalize: false,
        }
    }
}

impl ArnoldiOptions {
    pub fn householder() -> Self {
        Self { variant: ArnoldiVariant::Householder, ..Self::default() }
    }

    pub fn mgs() -> Self {
        Self::default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArnoldiDecomposition {
    options: ArnoldiOptions,
    beta: f64,
    breakdown: bool,
    /// `w_1 … w_{m+1}`.
    basis: Vec<Vec<f64>>,
    /// Column `j` (0-based) holds `h_{0..=j+1, j}`.
    hess: Vec<Vec<f64>>,
    /// Householder vectors (full length, zero above the pivot) and the sign
    /// flips that make `w_1 = b/‖b‖` and `h_{j+1,j} ≥ 0`.
    reflectors: Vec<Vec<f64>>,
    signs: Vec<f64>,
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Reflector `P = I − 2vvᵀ` acting on entries `k..` that maps `z[k..]` to
/// `α e_k`. Returns `(v, α)`.
fn householder_vector(z: &[f64], k: usize) -> (Vec<f64>, f64) {
    let n = z.len();
    let mut v = vec![0.0; n];
    let sigma = norm2(&z[k..]);
    if sigma == 0.0 {
        v[k] = 1.0;
        return (v, 0.0);
    }
    let alpha = -sign(z[k]) * sigma;
    v[k..].copy_from_slice(&z[k..]);
    v[k] -= alpha;
    let nv = norm2(&v[k..]);
    v[k..].iter_mut().for_each(|x| *x /= nv);
    (v, alpha)
}

#[inline]
fn reflect(v: &[f64], k: usize, y: &mut [f64]) {
    let c = 2.0 * dot(&v[k..], &y[k..]);
    axpy(-c, &v[k..], &mut y[k..]);
}

impl ArnoldiDecomposition {
    /// Zero-step decomposition holding `w_1 = b/‖b‖`.
    pub fn start(b: &[f64], options: ArnoldiOptions) -> Result<Self> {
        if !(options.breakdown_tol > 0.0) {
            return Err(Error::InvalidArgument("breakdown_tol must be positive"));
        }
        let beta = norm2(b);
        if beta == 0.0 {
            return Err(Error::ZeroVector);
        }
        if !beta.is_finite() {
            return Err(Error::NonFinite);
        }
        let mut dec = Self {
            options,
            beta,
            breakdown: false,
            basis: Vec::new(),
            hess: Vec::new(),
            reflectors: Vec::new(),
            signs: Vec::new(),
        };
        match options.variant {
            ArnoldiVariant::ModifiedGramSchmidt => {
                dec.basis.push(b.iter().map(|x| x / beta).collect());
            }
            ArnoldiVariant::Householder => {
                let (v, alpha) = householder_vector(b, 0);
                dec.reflectors.push(v);
                dec.signs.push(sign(alpha));
                let w = dec.householder_column(0);
                dec.basis.push(w);
                // The reflected vector is ±b/β up to rounding; pin it exactly.
                dec.basis[0] = b.iter().map(|x| x / beta).collect();
            }
        }
        Ok(dec)
    }

    /// `s_j P_0 ⋯ P_j e_j`
    fn householder_column(&self, j: usize) -> Vec<f64> {
        let n = self.reflectors[0].len();
        let mut w = vec![0.0; n];
        if j < n {
            w[j] = 1.0;
            for k in (0..=j).rev() {
                reflect(&self.reflectors[k], k, &mut w);
            }
            let s = self.signs[j];
            w.iter_mut().for_each(|x| *x *= s);
        }
        w
    }

    /// Number of completed steps `m`.
    pub fn steps(&self) -> usize {
        self.hess.len()
    }

    pub fn dim(&self) -> usize {
        self.basis[0].len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn breakdown(&self) -> bool {
        self.breakdown
    }

    pub fn variant(&self) -> ArnoldiVariant {
        self.options.variant
    }

    pub fn options(&self) -> ArnoldiOptions {
        self.options
    }

    /// `w_1 … w_{m+1}`.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Entry `h_{i,j}` with 0-based indices; zero below the subdiagonal.
    pub fn h(&self, i: usize, j: usize) -> f64 {
        self.hess[j].get(i).copied().unwrap_or(0.0)
    }

    /// `h_{j+1,j}` for 1-based `j ∈ 1..=m`.
    pub fn subdiagonal(&self, j: usize) -> Result<f64> {
        if j == 0 || j > self.steps() {
            return Err(Error::IndexOutOfRange { index: j, max: self.steps() });
        }
        Ok(self.hess[j - 1][j])
    }

    pub fn subdiagonals(&self) -> Vec<f64> {
        self.hess.iter().enumerate().map(|(j, c)| c[j + 1]).collect()
    }

    /// `ln ∏_{j ≤ m} h_{j+1,j}`, summed in log space; `−∞` once a
    /// subdiagonal vanishes.
    pub fn log_subdiagonal_product(&self, m: usize) -> f64 {
        self.subdiagonals().iter().take(m).map(|&h| libm::log(h)).sum()
    }

    /// `H_m` as an `(m+1) × m` matrix.
    pub fn hessenberg(&self) -> DenseMatrix {
        let m = self.steps();
        DenseMatrix::from_fn(m + 1, m, |i, j| self.h(i, j))
    }

    /// `H_j` for `j ≤ m`, the leading `(j+1) × j` block.
    pub fn hessenberg_at(&self, j: usize) -> DenseMatrix {
        assert!(j <= self.steps());
        DenseMatrix::from_fn(j + 1, j, |r, c| self.h(r, c))
    }

    /// First `cols` basis vectors as an `N × cols` matrix.
    pub fn basis_matrix(&self, cols: usize) -> DenseMatrix {
        DenseMatrix::from_columns(&self.basis[..cols])
    }

    /// `W[:, ..coeffs.len()] · coeffs`
    pub fn combine(&self, coeffs: &[f64]) -> Vec<f64> {
        assert!(coeffs.len() <= self.basis.len());
        let mut x = vec![0.0; self.dim()];
        for (w, &c) in self.basis.iter().zip(coeffs) {
            if c != 0.0 {
                axpy(c, w, &mut x);
            }
        }
        x
    }

    /// `W[:, ..cols]ᵀ y`
    pub fn project(&self, y: &[f64], cols: usize) -> Vec<f64> {
        self.basis[..cols].iter().map(|w| dot(w, y)).collect()
    }

    /// The leading `m`-step decomposition. Still resumable.
    pub fn truncated(&self, m: usize) -> Self {
        assert!(m <= self.steps());
        let mut out = self.clone();
        out.hess.truncate(m);
        out.basis.truncate(m + 1);
        if !out.reflectors.is_empty() {
            out.reflectors.truncate(m + 1);
            out.signs.truncate(m + 1);
        }
        out.breakdown = self.breakdown && m == self.steps();
        out
    }

    /// Continues the process up to `m_target` steps or until breakdown.
    pub fn expand<O: LinearOperator + ?Sized>(&mut self, op: &O, m_target: usize) -> Result<()> {
        let n = self.dim();
        if op.nrows() != n || op.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: op.ncols() });
        }
        let mut y = vec![0.0; n];
        while self.steps() < m_target && !self.breakdown {
            let j = self.steps();
            op.forward(&self.basis[j], &mut y);
            if !y.iter().all(|v| v.is_finite()) {
                return Err(Error::NonFinite);
            }
            match self.options.variant {
                ArnoldiVariant::ModifiedGramSchmidt => self.mgs_step(&mut y),
                ArnoldiVariant::Householder => self.householder_step(&mut y),
            }
        }
        Ok(())
    }

    fn mgs_step(&mut self, v: &mut [f64]) {
        let j = self.steps();
        let mut col = vec![0.0; j + 2];
        for (i, w) in self.basis.iter().enumerate() {
            let h = dot(w, v);
            col[i] = h;
            axpy(-h, w, v);
        }
        if self.options.reorthogonalize {
            for (i, w) in self.basis.iter().enumerate() {
                let h = dot(w, v);
                col[i] += h;
                axpy(-h, w, v);
            }
        }
        let h_next = norm2(v);
        col[j + 1] = h_next;
        self.hess.push(col);
        let n = v.len();
        if h_next < self.options.breakdown_tol * self.beta || j + 1 >= n {
            self.breakdown = true;
            let w = self.orthonormal_completion(n);
            self.basis.push(w);
        } else {
            self.basis.push(v.iter().map(|x| x / h_next).collect());
        }
    }

    /// Unit vector orthogonal to the current basis, or zero when the basis
    /// already spans the whole space.
    fn orthonormal_completion(&self, n: usize) -> Vec<f64> {
        if self.basis.len() >= n {
            return vec![0.0; n];
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            for _ in 0..2 {
                for w in &self.basis {
                    let c = dot(w, &e);
                    axpy(-c, w, &mut e);
                }
            }
            let nrm = norm2(&e);
            if best.as_ref().map_or(true, |(b, _)| nrm > *b) {
                best = Some((nrm, e));
            }
            if nrm > 0.5 {
                break;
            }
        }
        let (nrm, mut e) = best.expect("n > 0");
        e.iter_mut().for_each(|x| *x /= nrm);
        e
    }

    fn householder_step(&mut self, y: &mut [f64]) {
        let j = self.steps();
        let n = y.len();
        // y = A w_j with w_j = s_j P_0⋯P_j e_j, so h_{i,j} = s_i (P_j⋯P_0 y)_i.
        for k in 0..=j {
            reflect(&self.reflectors[k], k, y);
        }
        let mut col = vec![0.0; j + 2];
        let raw_next = if j + 1 < n {
            let (v, alpha) = householder_vector(y, j + 1);
            self.reflectors.push(v);
            alpha
        } else {
            0.0
        };
        for i in 0..=j {
            col[i] = self.signs[i] * y[i];
        }
        let s_next = sign(raw_next);
        col[j + 1] = raw_next.abs();
        self.hess.push(col);
        if j + 1 < n {
            self.signs.push(s_next);
            let w = self.householder_column(j + 1);
            self.basis.push(w);
        } else {
            self.basis.push(vec![0.0; n]);
        }
        if raw_next.abs() < self.options.breakdown_tol * self.beta || j + 1 >= n {
            self.breakdown = true;
        }
    }
}

/// Runs `m_target` Arnoldi steps on `K_m(op, b)`.
pub fn arnoldi_expand<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    m_target: usize,
    options: ArnoldiOptions,
) -> Result<ArnoldiDecomposition> {
    if b.len() != op.ncols() || op.nrows() != op.ncols() {
        return Err(Error::DimensionMismatch { expected: op.ncols(), found: b.len() });
    }
    if m_target == 0 {
        return Err(Error::InvalidArgument("m_target must be at least 1"));
    }
    let mut dec = ArnoldiDecomposition::start(b, options)?;
    dec.expand(op, m_target)?;
    Ok(dec)
}
