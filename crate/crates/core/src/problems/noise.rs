use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::norm2;

/// Seeded standard-normal stream: ChaCha8 bits through the Box–Muller
/// transform, so a given seed yields the same samples on every platform.
#[derive(Debug, Clone)]
pub struct NoiseRng {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NoiseRng {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    /// Uniform on `(0, 1]` with 53 random bits.
    fn unit_open(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.unit_open();
        let u2 = self.unit_open();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * PI * u2;
        self.spare = Some(r * libm::sin(theta));
        r * libm::cos(theta)
    }

    pub fn normal_vector(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.standard_normal()).collect()
    }
}

/// White Gaussian noise rescaled so that `‖e‖ / ‖b_exact‖ == eps_hat`
/// exactly. Returns `(b_exact + e, e)`.
pub fn add_noise(b_exact: &[f64], eps_hat: f64, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(eps_hat >= 0.0) || !eps_hat.is_finite() {
        return Err(Error::InvalidArgument("noise level must be a finite nonnegative number"));
    }
    let b_norm = norm2(b_exact);
    if eps_hat == 0.0 {
        return Ok((b_exact.to_vec(), alloc::vec![0.0; b_exact.len()]));
    }
    if b_norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let g = NoiseRng::new(seed).normal_vector(b_exact.len());
    let s = eps_hat * b_norm / norm2(&g);
    let e: Vec<f64> = g.iter().map(|x| x * s).collect();
    let b = b_exact.iter().zip(&e).map(|(x, y)| x + y).collect();
    Ok((b, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_level_leaves_data_untouched() {
        let (b, e) = add_noise(&[1.0, 2.0], 0.0, 7).unwrap();
        assert_eq!(b, [1.0, 2.0]);
        assert_eq!(e, [0.0, 0.0]);
    }

    #[test]
    fn level_is_exact() {
        let bex: Vec<f64> = (0..50).map(|i| (i as f64).sin() + 2.0).collect();
        for seed in 1..=5 {
            let (_, e) = add_noise(&bex, 1e-2, seed).unwrap();
            assert!((norm2(&e) / norm2(&bex) - 1e-2).abs() < 1e-14 * 1e-2 * 10.0);
        }
    }

    #[test]
    fn seeds_differ_norms_agree() {
        let bex = [1.0; 10];
        let (_, e1) = add_noise(&bex, 0.1, 1).unwrap();
        let (_, e2) = add_noise(&bex, 0.1, 2).unwrap();
        assert_ne!(e1, e2);
        assert!((norm2(&e1) - norm2(&e2)).abs() < 1e-15);
        assert_eq!(add_noise(&bex, 0.1, 1).unwrap().1, e1);
    }

    #[test]
    fn zero_data_with_noise_is_an_error() {
        assert_eq!(add_noise(&[0.0, 0.0], 0.1, 1), Err(Error::ZeroVector));
    }

    #[test]
    fn samples_look_standard_normal() {
        let mut rng = NoiseRng::new(3);
        let v = rng.normal_vector(20000);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / v.len() as f64;
        assert!(mean.abs() < 0.03 && (var - 1.0).abs() < 0.05);
    }
}
