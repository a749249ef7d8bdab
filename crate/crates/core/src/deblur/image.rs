use alloc::vec;
use alloc::vec::Vec;

use super::blur::{BlurOperator, BoundaryCondition};
use super::psf::Psf;
use crate::error::{Error, Result};
use crate::linalg::LinearOperator;
use crate::problems::add_noise;

/// Grayscale image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("image dimensions must be positive"));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch { expected: width * height, found: pixels.len() });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self { width, height, pixels: vec![0.0; width * height] }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self { width, height, pixels }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    /// Column-stacked vector.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.pixels.len());
        for c in 0..self.width {
            for r in 0..self.height {
                v.push(self.get(r, c));
            }
        }
        v
    }

    /// Inverse of [`Image::to_vector`].
    pub fn from_vector(width: usize, height: usize, v: &[f64]) -> Result<Self> {
        if v.len() != width * height {
            return Err(Error::DimensionMismatch { expected: width * height, found: v.len() });
        }
        Ok(Self::from_fn(width, height, |r, c| v[c * height + r]))
    }

    /// Removes `margin` pixels from every side.
    pub fn crop(&self, margin: usize) -> Result<Self> {
        if 2 * margin >= self.width || 2 * margin >= self.height {
            return Err(Error::InvalidArgument("crop margin leaves no pixels"));
        }
        Ok(Self::from_fn(self.width - 2 * margin, self.height - 2 * margin, |r, c| {
            self.get(r + margin, c + margin)
        }))
    }

    /// Pixels clamped to `[0, 1]`.
    pub fn clamped(&self) -> Self {
        Self { pixels: self.pixels.iter().map(|p| p.clamp(0.0, 1.0)).collect(), ..self.clone() }
    }
}

/// Piecewise-constant test scene on an `n × n` grid: a few rectangles, a disk,
/// a ring and a triangle over a dark background, values in `[0, 1]`.
pub fn phantom(n: usize) -> Image {
    let nf = n as f64;
    Image::from_fn(n, n, |r, c| {
        let y = (r as f64 + 0.5) / nf;
        let x = (c as f64 + 0.5) / nf;
        let mut v = 0.1;
        if (0.12..0.45).contains(&x) && (0.1..0.38).contains(&y) {
            v = 0.75;
        }
        if (0.2..0.32).contains(&x) && (0.18..0.3).contains(&y) {
            v = 0.3;
        }
        let d2 = (x - 0.68) * (x - 0.68) + (y - 0.3) * (y - 0.3);
        if d2 < 0.18 * 0.18 {
            v = 0.55;
        }
        if d2 < 0.08 * 0.08 {
            v = 1.0;
        }
        let e = (x - 0.3) * (x - 0.3) / (0.2 * 0.2) + (y - 0.72) * (y - 0.72) / (0.12 * 0.12);
        if e < 1.0 {
            v = 0.9;
        }
        if y > 0.55 && y < 0.9 && x > 0.58 && x < 0.92 && (y - 0.55) > (0.92 - x) * 0.35 / 0.34 {
            v = 0.65;
        }
        if (0.05..0.95).contains(&x) && (0.46..0.5).contains(&y) {
            v = 0.4;
        }
        v
    })
}

/// Deblurring test instance. The data are produced by blurring a larger scene
/// and cropping, so they are not generated by the operator used to invert
/// them.
#[derive(Debug, Clone)]
pub struct BlurredImageProblem {
    pub op: BlurOperator,
    pub x_exact: Vec<f64>,
    pub b_exact: Vec<f64>,
    pub b: Vec<f64>,
    pub noise: Vec<f64>,
    pub side: usize,
}

impl BlurredImageProblem {
    /// `scene` must be square; the recovered image is `scene` cropped by the
    /// PSF's reach on every side.
    pub fn new(scene: &Image, psf: Psf, bc: BoundaryCondition, eps_hat: f64, seed: u64) -> Result<Self> {
        if scene.width() != scene.height() {
            return Err(Error::InvalidArgument("scene must be square"));
        }
        let margin = psf.reach();
        let big = scene.width();
        let wide = BlurOperator::new(psf.clone(), BoundaryCondition::Zero, big)?;
        let blurred = Image::from_vector(big, big, &wide.apply(&scene.to_vector())?)?;
        let exact = scene.crop(margin)?;
        let side = exact.width();
        let b_exact = blurred.crop(margin)?.to_vector();
        let (b, noise) = add_noise(&b_exact, eps_hat, seed)?;
        Ok(Self { op: BlurOperator::new(psf, bc, side)?, x_exact: exact.to_vector(), b_exact, b, noise, side })
    }
}
