use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hgroup::GroupPoint;

/// `L_k^a(t)` by the three-term recurrence.
pub fn laguerre_poly(k: usize, a: usize, t: f64) -> f64 {
    let a = a as f64;
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - t;
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + a + 1.0 - t) * cur - (j + a) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `L_0^{n-1}, ..., L_K^{n-1}` at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LaguerreTable {
    pub n: usize,
    pub k_max: usize,
}

impl LaguerreTable {
    pub fn new(n: usize, k_max: usize) -> Self {
        Self { n, k_max }
    }

    /// Writes `L_k^{n-1}(t)` into `out[k]` for `k = 0..=K`.
    pub fn fill(&self, t: f64, out: &mut [f64]) {
        let a = (self.n - 1) as f64;
        out[0] = 1.0;
        if self.k_max == 0 {
            return;
        }
        out[1] = 1.0 + a - t;
        for j in 1..self.k_max {
            let jf = j as f64;
            out[j + 1] = ((2.0 * jf + a + 1.0 - t) * out[j] - (jf + a) * out[j - 1]) / (jf + 1.0);
        }
    }

    pub fn values(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.k_max + 1];
        self.fill(t, &mut out);
        out
    }

    /// Largest relative residual of the recurrence over `k < K`, scaled by
    /// the magnitude of the terms involved.
    pub fn recurrence_residual(&self, t: f64) -> f64 {
        let v = self.values(t);
        let a = (self.n - 1) as f64;
        let mut worst: f64 = 0.0;
        for k in 1..self.k_max {
            let kf = k as f64;
            let lhs = (kf + 1.0) * v[k + 1];
            let t1 = (2.0 * kf + a + 1.0 - t) * v[k];
            let t2 = (kf + a) * v[k - 1];
            let scale = lhs.abs().max(t1.abs()).max(t2.abs()).max(1.0);
            worst = worst.max((lhs - (t1 - t2)).abs() / scale);
        }
        worst
    }
}

/// `phi_k(z) = L_k^{n-1}(|z|^2 / 2) e^{-|z|^2 / 4}` as a function of `|z|^2`.
pub fn laguerre_fn_r2(k: usize, n: usize, r2: f64) -> f64 {
    laguerre_poly(k, n - 1, 0.5 * r2) * (-0.25 * r2).exp()
}

pub fn laguerre_fn(k: usize, z: &[Complex64]) -> f64 {
    let r2: f64 = z.iter().map(|w| w.norm_sqr()).sum();
    laguerre_fn_r2(k, z.len(), r2)
}

/// Which matrix coefficient to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    /// `e_k^lambda(z, t) = e^{-i lambda t} phi_k(sqrt|lambda| z)`
    Plain,
    /// `e_k^{lambda / (2k + n)}`
    Rescaled,
}

pub fn matrix_coeff(k: usize, lambda: f64, x: &GroupPoint, which: Coefficient) -> Result<Complex64> {
    if lambda == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let n = x.n();
    let mu = match which {
        Coefficient::Plain => lambda,
        Coefficient::Rescaled => lambda / (2 * k + n) as f64,
    };
    let phi = laguerre_fn_r2(k, n, mu.abs() * x.z_norm_sqr());
    Ok(Complex64::from_polar(phi, -mu * x.t()))
}
