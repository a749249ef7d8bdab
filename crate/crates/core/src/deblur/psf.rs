use alloc::vec;
use alloc::vec::Vec;
use libm::exp;

use crate::error::{Error, Result};

/// Point-spread function on a `q × q` grid, row-major, unit sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Psf {
    size: usize,
    entries: Vec<f64>,
    center: (usize, usize),
}

impl Psf {
    /// Normalizes `entries` to unit sum.
    pub fn new(size: usize, entries: Vec<f64>, center: (usize, usize)) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(Error::DimensionMismatch { expected: size * size, found: entries.len() });
        }
        if center.0 >= size || center.1 >= size {
            return Err(Error::InvalidArgument("PSF center outside the grid"));
        }
        if entries.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidArgument("PSF entries must be finite and nonnegative"));
        }
        let total: f64 = entries.iter().sum();
        if total == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self { size, entries: entries.iter().map(|p| p / total).collect(), center })
    }

    /// Single unit entry: the identity blur.
    pub fn delta() -> Self {
        Self { size: 1, entries: vec![1.0], center: (0, 0) }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn center(&self) -> (usize, usize) {
        self.center
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    /// Largest distance from the center to an edge of the grid.
    pub fn reach(&self) -> usize {
        let (k, l) = self.center;
        k.max(l).max(self.size - 1 - k).max(self.size - 1 - l)
    }

    /// The PSF turned by 180°.
    pub fn rotated(&self) -> Self {
        let q = self.size;
        let entries = (0..q * q).map(|idx| self.entries[q * q - 1 - idx]).collect();
        Self { size: q, entries, center: (q - 1 - self.center.0, q - 1 - self.center.1) }
    }
}

/// Anisotropic Gaussian
/// `exp(−(s2²(i−k)² − 2ρ²(i−k)(j−ℓ) + s1²(j−ℓ)²) / (2(s1²s2² − ρ⁴)))`
/// on a `d × d` grid centered at `(k, ℓ)`.
pub fn psf_gaussian_aniso(s1: f64, s2: f64, rho: f64, d: usize) -> Result<Psf> {
    if d % 2 == 0 {
        return Err(Error::InvalidArgument("PSF size must be odd"));
    }
    let det = s1 * s1 * s2 * s2 - rho * rho * rho * rho;
    if !(det > 0.0) {
        return Err(Error::InvalidArgument("Gaussian covariance is not positive definite"));
    }
    let c = (d / 2) as f64;
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let (di, dj) = (i as f64 - c, j as f64 - c);
            let q = s2 * s2 * di * di - 2.0 * rho * rho * di * dj + s1 * s1 * dj * dj;
            entries.push(exp(-q / (2.0 * det)));
        }
    }
    Psf::new(d, entries, (d / 2, d / 2))
}

/// Uniform mass on `length` cells of the main diagonal, centered in a
/// `d × d` grid.
pub fn psf_motion(length: usize, d: usize) -> Result<Psf> {
    if d % 2 == 0 || length == 0 || length > d {
        return Err(Error::InvalidArgument("motion PSF needs odd d and 1 <= length <= d"));
    }
    let c = d / 2;
    let first = c - (length - 1) / 2;
    let mut entries = vec![0.0; d * d];
    for t in first..first + length {
        entries[t * d + t] = 1.0;
    }
    Psf::new(d, entries, (c, c))
}
