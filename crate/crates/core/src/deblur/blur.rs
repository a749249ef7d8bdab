use alloc::vec;
use alloc::vec::Vec;

use super::psf::Psf;
use crate::error::{Error, Result};
use crate::krylov::{gmres_with_map, SolveTrace, SolverOptions};
use crate::linalg::{AdjointKind, Composed, LinearOperator};

/// Assumed image content outside the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Zero,
    Periodic,
    /// Half-sample mirror: `x(−1) = x(0)`, `x(−2) = x(1)`, …
    Reflective,
    /// Point reflection about the edge value: `x(−i) = 2x(0) − x(i)`.
    Antireflective,
}

/// Entries of the image a padded index maps to, with their weights.
type Extension = Vec<Vec<(usize, f64)>>;

fn extension(bc: BoundaryCondition, n: usize, pad: usize) -> Extension {
    let n_i = n as isize;
    (-(pad as isize)..n_i + pad as isize)
        .map(|t| {
            if (0..n_i).contains(&t) {
                return vec![(t as usize, 1.0)];
            }
            match bc {
                BoundaryCondition::Zero => Vec::new(),
                BoundaryCondition::Periodic => vec![(t.rem_euclid(n_i) as usize, 1.0)],
                BoundaryCondition::Reflective => {
                    let i = if t < 0 { -t - 1 } else { 2 * n_i - 1 - t };
                    vec![(i as usize, 1.0)]
                }
                BoundaryCondition::Antireflective => {
                    if t < 0 {
                        vec![(0, 2.0), ((-t) as usize, -1.0)]
                    } else {
                        let i = t - (n_i - 1);
                        vec![(n - 1, 2.0), ((n_i - 1 - i) as usize, -1.0)]
                    }
                }
            }
        })
        .collect()
}

/// Convolution of an `n × n` image with a PSF under a boundary condition,
/// evaluated directly in the spatial domain.
///
/// The transpose is exact for zero, periodic and reflective boundaries. For
/// antireflective boundaries the transpose action is the rotated-PSF operator
/// and is reported as [`AdjointKind::Surrogate`].
#[derive(Debug, Clone)]
pub struct BlurOperator {
    psf: Psf,
    bc: BoundaryCondition,
    n: usize,
    pad: usize,
    ext: Extension,
}

impl BlurOperator {
    pub fn new(psf: Psf, bc: BoundaryCondition, n: usize) -> Result<Self> {
        let pad = psf.reach();
        if n == 0 || pad >= n {
            return Err(Error::InvalidArgument("PSF reach must be smaller than the image side"));
        }
        let ext = extension(bc, n, pad);
        Ok(Self { psf, bc, n, pad, ext })
    }

    pub fn psf(&self) -> &Psf {
        &self.psf
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn side(&self) -> usize {
        self.n
    }

    /// Same boundary condition, PSF rotated by 180°.
    pub fn rotated(&self) -> Self {
        Self { psf: self.psf.rotated(), ..self.clone() }
    }

    fn padded_side(&self) -> usize {
        self.n + 2 * self.pad
    }

    /// Padded image (row-major, side `n + 2·pad`) from a column-stacked vector.
    fn pad_image(&self, x: &[f64]) -> Vec<f64> {
        let (n, m) = (self.n, self.padded_side());
        // rows first: z is m × n
        let mut z = vec![0.0; m * n];
        for (t, taps) in self.ext.iter().enumerate() {
            for &(i, w) in taps {
                for c in 0..n {
                    z[t * n + c] += w * x[c * n + i];
                }
            }
        }
        let mut out = vec![0.0; m * m];
        for t in 0..m {
            for (s, taps) in self.ext.iter().enumerate() {
                let mut v = 0.0;
                for &(j, w) in taps {
                    v += w * z[t * n + j];
                }
                out[t * m + s] = v;
            }
        }
        out
    }

    /// Transpose of [`Self::pad_image`].
    fn fold_image(&self, padded: &[f64], x: &mut [f64]) {
        let (n, m) = (self.n, self.padded_side());
        let mut z = vec![0.0; m * n];
        for t in 0..m {
            for (s, taps) in self.ext.iter().enumerate() {
                let v = padded[t * m + s];
                for &(j, w) in taps {
                    z[t * n + j] += w * v;
                }
            }
        }
        x.iter_mut().for_each(|v| *v = 0.0);
        for (t, taps) in self.ext.iter().enumerate() {
            for &(i, w) in taps {
                for c in 0..n {
                    x[c * n + i] += w * z[t * n + c];
                }
            }
        }
    }

    /// Offsets `(a, b, p)` of the nonzero PSF entries, shifted into padded
    /// coordinates: output pixel `(r, c)` reads padded pixel `(r + a, c + b)`.
    fn taps(&self) -> Vec<(usize, usize, f64)> {
        let q = self.psf.size();
        let (k, l) = self.psf.center();
        let mut out = Vec::new();
        for a in 0..q {
            for b in 0..q {
                let p = self.psf.get(a, b);
                if p != 0.0 {
                    out.push((k + self.pad - a, l + self.pad - b, p));
                }
            }
        }
        out
    }

    /// `Aᵀ y` through the transposed padding, valid for every boundary
    /// condition.
    fn exact_transpose(&self, y: &[f64], x: &mut [f64]) {
        let (n, m) = (self.n, self.padded_side());
        let mut padded = vec![0.0; m * m];
        for (da, db, p) in self.taps() {
            for c in 0..n {
                for r in 0..n {
                    padded[(r + da) * m + c + db] += p * y[c * n + r];
                }
            }
        }
        self.fold_image(&padded, x);
    }
}

impl LinearOperator for BlurOperator {
    fn nrows(&self) -> usize {
        self.n * self.n
    }

    fn ncols(&self) -> usize {
        self.n * self.n
    }

    fn forward(&self, x: &[f64], y: &mut [f64]) {
        let (n, m) = (self.n, self.padded_side());
        let padded = self.pad_image(x);
        y.iter_mut().for_each(|v| *v = 0.0);
        for (da, db, p) in self.taps() {
            for c in 0..n {
                for r in 0..n {
                    y[c * n + r] += p * padded[(r + da) * m + c + db];
                }
            }
        }
    }

    fn adjoint_kind(&self) -> AdjointKind {
        match self.bc {
            BoundaryCondition::Antireflective => AdjointKind::Surrogate,
            _ => AdjointKind::Exact,
        }
    }

    fn adjoint(&self, y: &[f64], x: &mut [f64]) -> Result<()> {
        if y.len() != self.nrows() || x.len() != self.ncols() {
            return Err(Error::DimensionMismatch { expected: self.nrows(), found: y.len() });
        }
        match self.bc {
            BoundaryCondition::Antireflective => self.rotated().forward(y, x),
            _ => self.exact_transpose(y, x),
        }
        Ok(())
    }
}

/// GMRES on `A A′ y = b`, recording `x = A′ y`.
pub fn rp_gmres<A, P>(
    a: &A,
    a_prime: &P,
    b: &[f64],
    opts: &SolverOptions,
    exact: Option<&[f64]>,
) -> Result<SolveTrace>
where
    A: LinearOperator + ?Sized,
    P: LinearOperator + ?Sized,
{
    let composed = Composed::new(a, a_prime)?;
    gmres_with_map(&composed, b, opts, exact, |y: &[f64]| a_prime.apply(y))
}
