//! Riesz means, the localized multipliers `F_{rho,delta,r}` and their square
//! functions, and the bilinear means with their maximal operator. Every
//! operator acts on a [`SpectralCache`], so `P_lambda f` is computed once per
//! field and reused across scales.

mod kernel;
mod params;

use num_complex::Complex64;
use rayon::prelude::*;

pub use kernel::{multiplier_kernel, riesz_kernel, KernelQuadrature};
pub use params::{MaximalGrid, RieszParams};

use crate::bump::BumpFunction;
use crate::error::{Error, Result};
use crate::field::SampledField;
use crate::quadrature::gauss_legendre;
use crate::spectral::SpectralCache;

/// `(1 - u)_+^alpha`, right-continuous: zero at `u = 1` even for `alpha = 0`.
pub fn riesz_multiplier(u: f64, alpha: f64) -> f64 {
    if u >= 1.0 {
        0.0
    } else if alpha == 0.0 {
        1.0
    } else {
        (1.0 - u).powf(alpha)
    }
}

fn check_scale(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveScale(r))
    }
}

fn check_width(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")))
    }
}

/// `S_r^alpha f = int (1 - r lambda)_+^alpha P_lambda f dmu(lambda)`.
pub fn linear_riesz(cache: &SpectralCache, r: f64, alpha: f64) -> Result<SampledField> {
    check_scale(r)?;
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be nonnegative, got {alpha}")));
    }
    Ok(cache.apply_multiplier(|l| riesz_multiplier(r * l, alpha), &[1.0 / r]))
}

/// Weights of `F_{rho,delta,r}^phi` on the cache's grid.
fn window_weights(cache: &SpectralCache, phi: &BumpFunction, rho: f64, delta: f64, r: f64) -> Vec<f64> {
    let (lo, hi) = phi.support();
    let (a, b) = ((rho - delta * hi) / r, (rho - delta * lo) / r);
    if b <= cache.grid().lambda_min() || a >= cache.grid().lambda_max() {
        return vec![0.0; cache.grid().len()];
    }
    cache
        .grid()
        .product_weights_within(|l| phi.value((rho - r * l) / delta), (a, b), &[a, b])
}

/// `F_{rho,delta,r}^phi f = int phi((rho - r lambda)/delta) P_lambda f dmu(lambda)`.
pub fn multiplier_op(cache: &SpectralCache, phi: &BumpFunction, rho: f64, delta: f64, r: f64) -> Result<SampledField> {
    check_scale(r)?;
    check_width(delta)?;
    Ok(cache.combine(&window_weights(cache, phi, rho, delta, r)))
}

/// `T_m f = int_a^b m(lambda) P_lambda f dmu(lambda)`.
pub fn general_multiplier(cache: &SpectralCache, m: impl Fn(f64) -> f64, a: f64, b_end: f64) -> Result<SampledField> {
    if !(a >= 0.0 && a < b_end) {
        return Err(Error::InvalidParameter(format!("need 0 <= a < b, got [{a}, {b_end}]")));
    }
    Ok(cache.apply_multiplier(|l| if l >= a && l <= b_end { m(l) } else { 0.0 }, &[a, b_end]))
}

/// `sum_rho sum_r w |F_{rho,delta,r}^phi f|^2` at every node, over the
/// `(rho, r, w)` triples, summed in the order given.
fn squared_sum(
    cache: &SpectralCache,
    phi: &BumpFunction,
    delta: f64,
    rhos: &[f64],
    scales: &[(f64, f64)],
) -> Vec<f64> {
    let len = cache.spec().len();
    let per_rho: Vec<Option<Vec<f64>>> = rhos
        .par_iter()
        .map(|&rho| {
            let mut acc: Option<Vec<f64>> = None;
            for &(r, w) in scales {
                let weights = window_weights(cache, phi, rho, delta, r);
                if weights.iter().all(|&x| x == 0.0) {
                    continue;
                }
                let field = cache.combine(&weights);
                let acc = acc.get_or_insert_with(|| vec![0.0; len]);
                for (a, v) in acc.iter_mut().zip(field.values()) {
                    *a += w * v.norm_sqr();
                }
            }
            acc
        })
        .collect();
    let mut out = vec![0.0; len];
    for part in per_rho.into_iter().flatten() {
        for (o, v) in out.iter_mut().zip(part) {
            *o += v;
        }
    }
    out
}

fn sqrt_field(cache: &SpectralCache, sq: Vec<f64>) -> SampledField {
    let values = sq.into_iter().map(|s| Complex64::new(s.sqrt(), 0.0)).collect();
    SampledField::from_values(*cache.spec(), values).expect("sizes agree")
}

/// The lattice `delta Z ∩ [lo, hi]`.
pub fn rho_lattice(delta: f64, lo: f64, hi: f64) -> Vec<f64> {
    let first = (lo / delta - 1e-9).ceil() as i64;
    let last = (hi / delta + 1e-9).floor() as i64;
    (first..=last).map(|j| j as f64 * delta).collect()
}

/// `D_{delta,k}^phi f = (sum_{rho in delta Z ∩ [0,2]} int_1^2 |F_{rho,delta,2^k r}^phi f|^2 dr)^{1/2}`,
/// with the `r` integral taken by the trapezoid rule on the grid's samples.
pub fn square_fn(
    cache: &SpectralCache,
    phi: &BumpFunction,
    delta: f64,
    k: i32,
    grid: &MaximalGrid,
) -> Result<SampledField> {
    check_width(delta)?;
    if delta > 0.25 {
        return Err(Error::InvalidParameter(format!("delta must be at most 1/4, got {delta}")));
    }
    grid.validate()?;
    let s = 2f64.powi(k);
    let scales: Vec<(f64, f64)> = grid
        .r_values()
        .into_iter()
        .zip(grid.r_weights())
        .map(|(r, w)| (s * r, w))
        .collect();
    let sq = squared_sum(cache, phi, delta, &rho_lattice(delta, 0.0, 2.0), &scales);
    Ok(sqrt_field(cache, sq))
}

/// `(int_{1/2}^1 |F_{rho,delta}^phi f|^2 drho)^{1/2}`, with `order`-point
/// Gauss-Legendre panels of width `delta`.
pub fn square_fn_continuum(cache: &SpectralCache, phi: &BumpFunction, delta: f64, order: usize) -> Result<SampledField> {
    check_width(delta)?;
    let panels = (0.5 / delta).ceil().max(1.0) as usize;
    let width = 0.5 / panels as f64;
    let (xs, ws) = gauss_legendre(order);
    let mut rhos = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let a = 0.5 + p as f64 * width;
        for (x, w) in xs.iter().zip(&ws) {
            rhos.push(a + 0.5 * width * (x + 1.0));
            weights.push(0.5 * width * w);
        }
    }
    let per: Vec<Vec<f64>> = rhos
        .par_iter()
        .zip(&weights)
        .map(|(&rho, &w)| {
            multiplier_op(cache, phi, rho, delta, 1.0)
                .map(|f| f.values().iter().map(|v| w * v.norm_sqr()).collect())
        })
        .collect::<Result<_>>()?;
    let mut sq = vec![0.0; cache.spec().len()];
    for part in per {
        for (o, v) in sq.iter_mut().zip(part) {
            *o += v;
        }
    }
    Ok(sqrt_field(cache, sq))
}

/// The lattice counterpart of [`square_fn_continuum`]:
/// `(delta sum_{rho in delta Z ∩ [1/2,1]} |F_{rho,delta}^phi f|^2)^{1/2}`.
pub fn square_fn_lattice(cache: &SpectralCache, phi: &BumpFunction, delta: f64) -> Result<SampledField> {
    check_width(delta)?;
    let sq = squared_sum(cache, phi, delta, &rho_lattice(delta, 0.5, 1.0), &[(1.0, delta)]);
    Ok(sqrt_field(cache, sq))
}

fn check_pair(f: &SpectralCache, g: &SpectralCache) -> Result<()> {
    if !f.spec().same_as(g.spec()) || f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Rows of the tensor sum handled together; bounds scratch memory.
const ROW_CHUNK: usize = 16;

/// `int int m(lambda_1 + lambda_2) P_{lambda_1} f P_{lambda_2} g dmu dmu` by
/// tensor Gauss-Legendre quadrature on the shared grid.
pub fn bilinear_apply(f: &SpectralCache, g: &SpectralCache, m: impl Fn(f64) -> f64 + Sync) -> Result<SampledField> {
    check_pair(f, g)?;
    let grid = f.grid();
    let (nodes, w) = (grid.nodes(), grid.weights());
    let len = f.spec().len();
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    let rows: Vec<usize> = (0..nodes.len()).collect();
    for chunk in rows.chunks(ROW_CHUNK) {
        let parts: Vec<Option<Vec<Complex64>>> = chunk
            .par_iter()
            .map(|&i| {
                let weights: Vec<f64> = (0..nodes.len())
                    .map(|j| w[i] * w[j] * m(nodes[i] + nodes[j]))
                    .collect();
                if weights.iter().all(|&x| x == 0.0) {
                    return None;
                }
                let gi = g.combine(&weights);
                let fi = f.fields()[i].values();
                Some(fi.iter().zip(gi.values()).map(|(a, b)| a * b).collect())
            })
            .collect();
        for part in parts.into_iter().flatten() {
            for (o, v) in out.iter_mut().zip(part) {
                *o += v;
            }
        }
    }
    SampledField::from_values(*f.spec(), out)
}

/// `S_r^alpha(f, g)` with multiplier `(1 - r(lambda_1 + lambda_2))_+^alpha`.
pub fn bilinear_riesz(f: &SpectralCache, g: &SpectralCache, alpha: f64, r: f64) -> Result<SampledField> {
    check_scale(r)?;
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be nonnegative, got {alpha}")));
    }
    bilinear_apply(f, g, |s| riesz_multiplier(r * s, alpha))
}

/// One piece of the dyadic splitting of `(1 - u)_+^alpha`.
#[derive(Debug, Clone, Copy)]
pub enum Localized<'a> {
    /// `psi((1 - r(lambda_1 + lambda_2)) / delta)`.
    Band { psi: &'a BumpFunction, delta: f64 },
    /// `psi_0(r(lambda_1 + lambda_2))`.
    Low { psi0: &'a BumpFunction },
}

/// `S_r^delta(f, g)` or `S_r^0(f, g)`.
pub fn bilinear_localized(f: &SpectralCache, g: &SpectralCache, piece: Localized<'_>, r: f64) -> Result<SampledField> {
    check_scale(r)?;
    match piece {
        Localized::Band { psi, delta } => {
            check_width(delta)?;
            bilinear_apply(f, g, |s| psi.value((1.0 - r * s) / delta))
        }
        Localized::Low { psi0 } => bilinear_apply(f, g, |s| psi0.value(r * s)),
    }
}

/// `d/dr S_{2^k r}^delta(f, g)` from the differentiated multiplier
/// `-2^k s / delta psi'((1 - 2^k r s) / delta)`.
pub fn bilinear_localized_dr(
    f: &SpectralCache,
    g: &SpectralCache,
    psi: &BumpFunction,
    delta: f64,
    k: i32,
    r: f64,
) -> Result<SampledField> {
    check_scale(r)?;
    check_width(delta)?;
    let c = 2f64.powi(k);
    bilinear_apply(f, g, |s| -c * s / delta * psi.derivative((1.0 - c * r * s) / delta, 1))
}

/// `max |S_{2^k r}^alpha(f, g)|` over the scales of `grid`.
pub fn maximal_bilinear(f: &SpectralCache, g: &SpectralCache, alpha: f64, grid: &MaximalGrid) -> Result<SampledField> {
    maximal_over(f, g, alpha, &grid.scales())
}

/// `max |S_r^alpha(f, g)|` over an explicit list of scales.
pub fn maximal_over(f: &SpectralCache, g: &SpectralCache, alpha: f64, scales: &[f64]) -> Result<SampledField> {
    check_pair(f, g)?;
    let lo = 2.0 * f.grid().lambda_min();
    let mut best = vec![0.0f64; f.spec().len()];
    for &r in scales {
        // Scales whose multiplier vanishes on the grid contribute 0.
        if r * lo >= 1.0 {
            continue;
        }
        let s = bilinear_riesz(f, g, alpha, r)?;
        for (b, v) in best.iter_mut().zip(s.values()) {
            *b = b.max(v.norm());
        }
    }
    let values = best.into_iter().map(|b| Complex64::new(b, 0.0)).collect();
    SampledField::from_values(*f.spec(), values)
}
