//! Laguerre calculus for the sublaplacian: matrix coefficients, spectral
//! pieces `f * e_k^mu`, the projections `P_lambda`, Plancherel and
//! Littlewood-Paley projections.
//!
//! Writing `f^mu(w) = int e^{i mu s} f(w, s) ds`, a direct computation of the
//! group convolution gives
//! `(f * e_k^mu)(z, t) = e^{-i mu t} int phi_k^{|mu|}(z - w) f^mu(w) e^{-(i/2) mu Im(z . conj(w))} dw`,
//! i.e. `e^{-i mu t} (f^mu *_mu phi_k^{|mu|})(z)`. Everything below is built on
//! that identity; the tests check it against the group convolution itself.

mod cache;
mod grid;
mod laguerre;
mod twisted;

pub use cache::SpectralCache;
pub use grid::{plancherel_density, SpectralGrid, SpectralParams};
pub use laguerre::{laguerre_fn, laguerre_fn_r2, laguerre_poly, matrix_coeff, Coefficient, LaguerreTable};
pub use twisted::twisted_convolve;

use num_complex::Complex64;

use crate::bump::BumpFunction;
use crate::error::{Error, Result};
use crate::field::{SampledField, ZArray};
use crate::quadrature::pairwise_sum;
use twisted::{apply_kernel, DiffKernel};

/// `(f^mu *_mu phi_k^{|mu|})(z)` on the `z`-grid, from a precomputed `f^mu`.
pub(crate) fn piece_z(f_mu: &ZArray, k: usize, mu: f64) -> ZArray {
    let spec = f_mu.spec();
    let scale = mu.abs();
    let kernel = DiffKernel::radial(spec, |r2| laguerre_fn_r2(k, spec.n, scale * r2));
    apply_kernel(&kernel, f_mu, -mu).expect("kernel built on the same grid")
}

/// `f * e_k^mu`.
pub fn spectral_piece(f: &SampledField, k: usize, mu: f64) -> Result<SampledField> {
    if mu == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    Ok(piece_z(&f.partial_fourier_t(mu), k, mu).modulate_in_t(mu))
}

/// Adds `coeff * e^{-i mu t} u(z)` to a full field buffer.
pub(crate) fn accumulate_modulated(out: &mut [Complex64], u: &ZArray, mu: f64, coeff: f64) {
    let spec = u.spec();
    let m_t = spec.m_t;
    let phase: Vec<Complex64> = (0..m_t)
        .map(|i| Complex64::from_polar(coeff, -mu * spec.t_coord(i)))
        .collect();
    for (row, uz) in out.chunks_exact_mut(m_t).zip(u.values()) {
        for (o, p) in row.iter_mut().zip(&phase) {
            *o += uz * p;
        }
    }
}

/// `P_lambda f = sum_{k <= K} (2k+n)^{-n-1} f * (e_k^{lambda/(2k+n)} + e_k^{-lambda/(2k+n)})`.
///
/// Terms whose frequency `lambda/(2k+n)` exceeds the `t`-grid Nyquist
/// frequency `pi / h_t` are dropped: the grid cannot carry them, and the
/// trapezoid transform would fold them onto low frequencies.
pub fn p_lambda(f: &SampledField, lambda: f64, k_max: usize) -> Result<SampledField> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("P_lambda needs lambda > 0, got {lambda}")));
    }
    let spec = *f.spec();
    let n = spec.n;
    let real = f.is_real();
    let mut out = vec![Complex64::new(0.0, 0.0); spec.len()];
    for k in 0..=k_max {
        let c = (2 * k + n) as f64;
        let mu = lambda / c;
        if mu > spec.t_nyquist() {
            continue;
        }
        let coeff = c.powi(-(n as i32) - 1);
        let u = piece_z(&f.partial_fourier_t(mu), k, mu);
        accumulate_modulated(&mut out, &u, mu, coeff);
        if !real {
            let u = piece_z(&f.partial_fourier_t(-mu), k, -mu);
            accumulate_modulated(&mut out, &u, -mu, coeff);
        }
    }
    if real {
        // The -mu piece of a real field is the conjugate of the +mu piece.
        for v in &mut out {
            *v = Complex64::new(2.0 * v.re, 0.0);
        }
    }
    SampledField::from_values(spec, out)
}

/// Both sides of the Plancherel identity, with the right side split by
/// Laguerre index so that partial truncations can be read off one run.
#[derive(Debug, Clone, PartialEq)]
pub struct PlancherelTerms {
    pub lhs: f64,
    /// Per-`k` contributions, `||v *_mu phi_k^mu||^2` taken as
    /// `(2 pi / mu)^n <v *_mu phi_k^mu, v>`.
    pub per_k: Vec<f64>,
    /// Per-`k` contributions with `||v *_mu phi_k^mu||^2` summed over the box
    /// nodes only; pieces reaching past the box are truncated.
    pub per_k_box: Vec<f64>,
}

impl PlancherelTerms {
    /// Right-hand side truncated at `k <= k_max`.
    pub fn rhs(&self, k_max: usize) -> f64 {
        pairwise_sum(&self.per_k[..=k_max.min(self.per_k.len() - 1)])
    }

    pub fn rhs_box(&self, k_max: usize) -> f64 {
        pairwise_sum(&self.per_k_box[..=k_max.min(self.per_k_box.len() - 1)])
    }

    pub fn relative_error(&self, k_max: usize) -> f64 {
        relative_gap(self.lhs, self.rhs(k_max))
    }

    pub fn relative_error_box(&self, k_max: usize) -> f64 {
        relative_gap(self.lhs, self.rhs_box(k_max))
    }
}

fn relative_gap(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        rhs.abs()
    } else {
        (lhs - rhs).abs() / lhs
    }
}

/// `||f||_2^2` against
/// `(2 pi)^{-2n-1} sum_k int_R int |f^mu *_mu phi_k^mu|^2 |mu|^{2n} dz dmu`,
/// with the `mu`-integral on the grid nodes (both signs).
///
/// `v -> (mu / 2 pi)^n v *_mu phi_k^mu` is an orthogonal projection, so the
/// inner `z`-integral equals `(2 pi / mu)^n <v *_mu phi_k^mu, v>`. That form
/// only needs the piece where `v = f^mu` lives, while the piece itself spreads
/// far past the box for small `mu`; it is the one used for [`rhs`](PlancherelTerms::rhs).
pub fn plancherel_terms(f: &SampledField, grid: &SpectralGrid) -> Result<PlancherelTerms> {
    let n = f.spec().n;
    if grid.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: grid.n(),
        });
    }
    let lhs = f.lp_norm(2.0)?.powi(2);
    let real = f.is_real();
    let rows = grid.k_max() + 1;
    let mut table = vec![vec![0.0; grid.len()]; rows];
    let mut table_box = vec![vec![0.0; grid.len()]; rows];
    let extra = (2.0 * std::f64::consts::PI).powi(-(n as i32));
    let two_pi = 2.0 * std::f64::consts::PI;
    for (j, (&mu, &w)) in grid.nodes().iter().zip(grid.weights()).enumerate() {
        let scale = w * extra * mu.powi(n as i32);
        let proj = (two_pi / mu).powi(n as i32);
        let sides: Vec<(ZArray, f64)> = if real {
            vec![(f.partial_fourier_t(mu), mu)]
        } else {
            vec![(f.partial_fourier_t(mu), mu), (f.partial_fourier_t(-mu), -mu)]
        };
        let mult = if real { 2.0 } else { 1.0 };
        for k in 0..rows {
            for (v, m) in &sides {
                let u = piece_z(v, k, *m);
                let inner = u.inner(v).expect("same grid").re;
                table[k][j] += mult * scale * proj * inner;
                table_box[k][j] += mult * scale * u.norm_sqr();
            }
        }
    }
    Ok(PlancherelTerms {
        lhs,
        per_k: table.iter().map(|row| pairwise_sum(row)).collect(),
        per_k_box: table_box.iter().map(|row| pairwise_sum(row)).collect(),
    })
}

/// `(||f||_2^2, rhs)` at the grid's truncation.
pub fn plancherel_check(f: &SampledField, grid: &SpectralGrid) -> Result<(f64, f64)> {
    let terms = plancherel_terms(f, grid)?;
    Ok((terms.lhs, terms.rhs(grid.k_max())))
}

/// `P_m f = int beta(2^{-m} lambda) P_lambda f dmu(lambda)`.
pub fn littlewood_paley_project(cache: &SpectralCache, m: i32, beta: &BumpFunction) -> SampledField {
    let s = 2f64.powi(m);
    let (a, b) = beta.support();
    cache.apply_multiplier(|l| beta.value(l / s), &[a * s, b * s])
}
