use alloc::vec::Vec;
use libm::{exp, fabs, log};

use super::Discretization;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Which function is transformed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LaplaceExample {
    /// `f(t) = exp(−t/2)`, `g(s) = 1/(s + 1/2)`.
    Exp,
    /// `f(t) = t² exp(−t/2)`, `g(s) = 2/(s + 1/2)³`.
    T2Exp,
}

/// Evaluates `L_n(z)` and `L_{n−1}(z)` by the three-term recurrence, keeping
/// the pair rescaled. Returns `(L_n, L_{n−1}, log_scale)` with the true values
/// equal to the returned ones times `exp(log_scale)`.
fn laguerre_pair(n: usize, z: f64) -> (f64, f64, f64) {
    let (mut p1, mut p2) = (1.0_f64, 0.0_f64);
    let mut log_scale = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
        let m = fabs(p1).max(fabs(p2));
        if m > 1e100 {
            p1 /= m;
            p2 /= m;
            log_scale += log(m);
        }
    }
    (p1, p2, log_scale)
}

/// Gauss–Laguerre nodes `t_j` (ascending) and log-weights `ln w_j` for the
/// weight `e^{−t}` on `[0, ∞)`.
///
/// Newton iteration on `L_n` with the classic asymptotic starting guesses; the
/// weights stay in log form because they underflow for the largest nodes.
pub fn gauss_laguerre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node"));
    }
    let nf = n as f64;
    let mut nodes: Vec<f64> = Vec::with_capacity(n);
    let mut log_w = Vec::with_capacity(n);
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut converged = false;
        let mut lw = 0.0;
        for _ in 0..200 {
            let (p1, p2, ls) = laguerre_pair(n, z);
            // L_n'(z) = n (L_n − L_{n−1}) / z
            let pp = nf * (p1 - p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            // w = z / ((n+1) L_{n+1}(z))² = 1 / (z L_n'(z)² ), written with
            // L_n(z) = 0 as −1/(n L_n'(z) L_{n−1}(z)).
            lw = -(log(fabs(pp * nf * p2)) + 2.0 * ls);
            if fabs(z - z1) <= 1e-13 * z {
                converged = true;
                break;
            }
        }
        if !converged || !(z > 0.0) || (i > 0 && z <= nodes[i - 1]) {
            return Err(Error::InvalidArgument("Gauss-Laguerre iteration failed"));
        }
        nodes.push(z);
        log_w.push(lw);
    }
    Ok((nodes, log_w))
}

/// Inverse Laplace transform `∫₀^∞ e^{−st} f(t) dt = g(s)` discretized by
/// Gauss–Laguerre quadrature at the collocation points `s_i = 10 i / n`.
pub fn i_laplace(n: usize, example: LaplaceExample) -> Result<Discretization> {
    if n < 2 {
        return Err(Error::InvalidArgument("i_laplace needs n >= 2"));
    }
    let (t, log_w) = gauss_laguerre(n)?;
    let s: Vec<f64> = (1..=n).map(|i| 10.0 * i as f64 / n as f64).collect();
    let a = DenseMatrix::from_fn(n, n, |i, j| exp((1.0 - s[i]) * t[j] + log_w[j]));
    let x: Vec<f64> = match example {
        LaplaceExample::Exp => t.iter().map(|&tj| exp(-tj / 2.0)).collect(),
        LaplaceExample::T2Exp => t.iter().map(|&tj| tj * tj * exp(-tj / 2.0)).collect(),
    };
    let g: Vec<f64> = match example {
        LaplaceExample::Exp => s.iter().map(|&si| 1.0 / (si + 0.5)).collect(),
        LaplaceExample::T2Exp => s.iter().map(|&si| 2.0 / ((si + 0.5) * (si + 0.5) * (si + 0.5))).collect(),
    };
    let mut d = Discretization::from_matrix(a, x);
    d.rhs_analytic = Some(g);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_moments() {
        // ∫ tᵏ e^{−t} dt = k!
        let (t, lw) = gauss_laguerre(40).unwrap();
        let mut fact = 1.0;
        for k in 0..10 {
            if k > 0 {
                fact *= k as f64;
            }
            let q: f64 = t.iter().zip(&lw).map(|(&ti, &l)| exp(l) * libm::pow(ti, k as f64)).sum();
            assert!((q - fact).abs() <= 1e-11 * fact, "moment {k}: {q} vs {fact}");
        }
    }

    #[test]
    fn two_point_rule_is_exact() {
        let (t, lw) = gauss_laguerre(2).unwrap();
        let r2 = libm::sqrt(2.0);
        assert!((t[0] - (2.0 - r2)).abs() < 1e-14 && (t[1] - (2.0 + r2)).abs() < 1e-14);
        assert!((exp(lw[0]) - (2.0 + r2) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_tiny_n() {
        assert!(i_laplace(1, LaplaceExample::Exp).is_err());
    }
}
