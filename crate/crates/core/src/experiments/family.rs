use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{GridSpec, SampledField};

/// Members of the test-field family. Each is a Gaussian in `(z, t)`,
/// varied so the family spans low and high `t`-frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestField {
    /// `e^{-|z|^2 - t^2}`.
    Gaussian,
    /// The Gaussian recentred at `(z_0, t_0)`.
    Shifted { z0: [f64; 2], t0: f64 },
    /// `e^{i lambda_0 t}` times the Gaussian.
    Modulated { lambda0: f64 },
    /// `H_1(t) = 2t` times the Gaussian.
    Hermite,
    /// `e^{-a|z|^2 - b t^2}`.
    Anisotropic { a: f64, b: f64 },
}

impl TestField {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Shifted { .. } => "shifted",
            Self::Modulated { .. } => "modulated",
            Self::Hermite => "hermite",
            Self::Anisotropic { .. } => "anisotropic",
        }
    }

    /// Value at `x = (x_1, y_1, ..., x_n, y_n, t)`.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let d = x.len() - 1;
        let t = x[d];
        let r2: f64 = x[..d].iter().map(|v| v * v).sum();
        let g = |r2: f64, t: f64| (-r2 - t * t).exp();
        match *self {
            Self::Gaussian => Complex64::new(g(r2, t), 0.0),
            Self::Shifted { z0, t0 } => {
                let r2: f64 = x[..d]
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v - z0[i % 2]).powi(2))
                    .sum();
                Complex64::new(g(r2, t - t0), 0.0)
            }
            Self::Modulated { lambda0 } => Complex64::from_polar(g(r2, t), lambda0 * t),
            Self::Hermite => Complex64::new(2.0 * t * g(r2, t), 0.0),
            Self::Anisotropic { a, b } => Complex64::new((-a * r2 - b * t * t).exp(), 0.0),
        }
    }

    pub fn sample(&self, spec: GridSpec) -> SampledField {
        SampledField::from_fn(spec, |x| self.eval(x))
    }

    /// Samples of `f(delta_s x)`, evaluated exactly rather than interpolated.
    pub fn sample_dilated(&self, spec: GridSpec, s: f64) -> SampledField {
        let d = spec.dims() - 1;
        SampledField::from_fn(spec, |x| {
            let mut y = x.to_vec();
            y[..d].iter_mut().for_each(|v| *v *= s);
            y[d] *= s * s;
            self.eval(&y)
        })
    }
}

/// The five-member family, with shifts, modulation and anisotropy drawn
/// from `seed`.
pub fn test_family(seed: u64) -> Vec<TestField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
    let t0 = rng.gen_range(-0.5..0.5);
    let lambda0 = rng.gen_range(0.5..1.5);
    let a = rng.gen_range(0.6..1.6);
    let b = rng.gen_range(0.6..1.6);
    vec![
        TestField::Gaussian,
        TestField::Shifted { z0: shift, t0 },
        TestField::Modulated { lambda0 },
        TestField::Hermite,
        TestField::Anisotropic { a, b },
    ]
}
