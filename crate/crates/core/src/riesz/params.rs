use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents and scales shared by the Riesz-mean experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszParams {
    pub n: usize,
    pub alpha: f64,
    pub r: f64,
    pub delta: f64,
    pub kappa: f64,
    pub b: f64,
    pub p1: f64,
    pub p2: f64,
}

impl RieszParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if !(self.alpha >= 0.0) {
            return bad(format!("alpha must be nonnegative, got {}", self.alpha));
        }
        if !(self.r > 0.0) {
            return bad(format!("r must be positive, got {}", self.r));
        }
        if !(self.delta > 0.0 && self.delta <= 0.25) {
            return bad(format!("delta must lie in (0, 1/4], got {}", self.delta));
        }
        if !(self.kappa > 0.0) {
            return bad(format!("kappa must be positive, got {}", self.kappa));
        }
        if !(self.b > (self.d() as f64 - 1.0) / 2.0) {
            return bad(format!("b must exceed (D-1)/2 = {}, got {}", (self.d() as f64 - 1.0) / 2.0, self.b));
        }
        for p in [self.p1, self.p2] {
            if !(p >= 2.0) {
                return bad(format!("p1, p2 must lie in [2, inf], got {p}"));
            }
        }
        Ok(())
    }

    pub fn q(&self) -> usize {
        2 * self.n + 2
    }

    pub fn d(&self) -> usize {
        2 * self.n + 1
    }

    /// Kernel-decay order `Q/2 + 1`.
    pub fn m(&self) -> usize {
        self.q() / 2 + 1
    }

    /// `1/p = 1/p1 + 1/p2`.
    pub fn p(&self) -> f64 {
        1.0 / (1.0 / self.p1 + 1.0 / self.p2)
    }

    /// `delta^{1 + kappa}`.
    pub fn delta_tilde(&self) -> f64 {
        self.delta.powf(1.0 + self.kappa)
    }

    /// The exponent `D(1 - 1/p) + 3/p`.
    pub fn critical_alpha(&self) -> f64 {
        let inv = 1.0 / self.p();
        self.d() as f64 * (1.0 - inv) + 3.0 * inv
    }
}

/// Finite stand-in for `sup_{r > 0}`: scales `2^k r` with `k` in
/// `k_min..=k_max` and `r` on `r_samples` equispaced points of `[1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalGrid {
    pub k_min: i32,
    pub k_max: i32,
    pub r_samples: usize,
}

impl MaximalGrid {
    pub fn new(k_min: i32, k_max: i32, r_samples: usize) -> Result<Self> {
        let g = Self { k_min, k_max, r_samples };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_min > self.k_max {
            return Err(Error::InvalidParameter(format!("empty k range {}..={}", self.k_min, self.k_max)));
        }
        if self.r_samples < 4 {
            return Err(Error::InvalidParameter(format!("need at least 4 r samples, got {}", self.r_samples)));
        }
        Ok(())
    }

    pub fn r_values(&self) -> Vec<f64> {
        let last = (self.r_samples - 1) as f64;
        (0..self.r_samples).map(|i| 1.0 + i as f64 / last).collect()
    }

    /// Trapezoid weights on [`r_values`](Self::r_values) for `int_1^2 dr`.
    pub fn r_weights(&self) -> Vec<f64> {
        let h = 1.0 / (self.r_samples - 1) as f64;
        (0..self.r_samples)
            .map(|i| if i == 0 || i + 1 == self.r_samples { 0.5 * h } else { h })
            .collect()
    }

    pub fn ks(&self) -> impl Iterator<Item = i32> {
        self.k_min..=self.k_max
    }

    /// Every sampled scale `2^k r`.
    pub fn scales(&self) -> Vec<f64> {
        let rs = self.r_values();
        self.ks()
            .flat_map(|k| rs.iter().map(move |r| 2f64.powi(k) * r))
            .collect()
    }
}

impl Default for MaximalGrid {
    fn default() -> Self {
        Self {
            k_min: -6,
            k_max: 6,
            r_samples: 16,
        }
    }
}
