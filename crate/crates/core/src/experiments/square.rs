use num_complex::Complex64;

use super::{cache, exponents_to_values, log_slope, relative, slope_row, test_family, ExperimentConfig, ExperimentReport, Row, TestField};
use crate::bump::BumpFunction;
use crate::error::Result;
use crate::field::{GridSpec, SampledField};
use crate::riesz::{multiplier_op, square_fn, square_fn_continuum, square_fn_lattice};
use crate::spectral::{SpectralCache, SpectralGrid, SpectralParams};

/// Gauss-Legendre order per `delta`-panel in the continuum square function.
const CONTINUUM_ORDER: usize = 4;

/// Window centre used for the dilation identities.
const RHO: f64 = 1.0;

/// Dilation identities for `F_{rho,delta,r}^phi`, then the `delta`-scaling of
/// `sup_k D_{delta,k}^phi` in `L^p` over the test family.
pub fn run_square_scaling(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(config.hash());
    let phi = config.bump.build(2 * config.riesz.m() + 2);
    dilation_rows(config, &phi, &mut report)?;
    scaling_rows(config, &phi, &mut report)?;
    Ok(report)
}

/// The grid restricted to `[lambda_min, lambda_max']`, keeping the panel width.
fn clipped(params: &SpectralParams, n: usize, lambda_max: f64) -> Result<SpectralGrid> {
    let width = (params.lambda_max - params.lambda_min) / params.panels as f64;
    let panels = ((lambda_max - params.lambda_min) / width).ceil().max(1.0) as usize;
    SpectralParams {
        lambda_max: params.lambda_min + panels as f64 * width,
        panels,
        ..*params
    }
    .build(n)
}

/// `F_{t rho, t delta, r} f = F_{rho, delta, r/t} f`, and
/// `F_{rho,delta,r} f(x) = F_{rho,delta} f_{sqrt r}(delta_{1/sqrt r} x)`.
///
/// The right side of the second identity is evaluated at the exact points
/// `delta_{1/sqrt r} x` by computing it on the grid whose nodes are those
/// points. The multilinear-resampling variant is reported alongside.
fn dilation_rows(config: &ExperimentConfig, phi: &BumpFunction, report: &mut ExperimentReport) -> Result<()> {
    let spec = config.grid;
    let rho = RHO;
    let delta = config.riesz.delta;
    let ts = config.sweep_list("dilation_t")?;
    let rs = config.sweep_list("dilation_r")?;
    let tol = config.tolerance("dilation_rel")?;
    // Every window below sits under max(t, 1) (rho + delta) / min r.
    let r_min = rs.iter().copied().fold(f64::INFINITY, f64::min);
    let t_max = ts.iter().copied().fold(1.0, f64::max);
    let top = 1.1 * t_max * (rho + delta) / r_min;
    let grid = clipped(&config.spectral, spec.n, top)?;
    for (index, field) in test_family(config.seed).into_iter().enumerate() {
        let c = cache(config, &field.sample(spec), &grid)?;
        for &t in ts {
            for &r in rs {
                let lhs = multiplier_op(&c, phi, t * rho, t * delta, r)?;
                let rhs = multiplier_op(&c, phi, rho, delta, r / t)?;
                let err = relative(&lhs, &rhs, 2.0)?;
                report.push(
                    Row::new("square/dilation")
                        .param("field", field.name())
                        .param("t", t)
                        .param("r", r)
                        .param("rho", rho)
                        .param("delta", delta)
                        .measure("rel_discrepancy", err)
                        .check(err <= tol),
                );
            }
        }
        for &r in rs {
            let s = r.sqrt();
            let direct = multiplier_op(&c, phi, rho, delta, r)?;
            let aligned = GridSpec {
                extent_z: spec.extent_z / s,
                extent_t: spec.extent_t / r,
                ..spec
            };
            let g = if r == 1.0 {
                multiplier_op(&c, phi, rho, delta, 1.0)?
            } else {
                let c_aligned = cache(config, &field.sample_dilated(aligned, s), &grid)?;
                multiplier_op(&c_aligned, phi, rho, delta, 1.0)?
            };
            // Node i of the aligned grid is delta_{1/sqrt r} of node i of `spec`.
            let g = SampledField::from_values(spec, g.into_values())?;
            let err = relative(&g, &direct, 2.0)?;
            let mut row = Row::new("square/rescaled")
                .param("field", field.name())
                .param("r", r)
                .param("rho", rho)
                .param("delta", delta)
                .measure("rel_discrepancy", err);
            if index == 0 {
                row = row.measure("rel_discrepancy_interpolated", interpolated(config, phi, field, r, &grid, &direct)?);
            }
            report.push(row.check(err <= tol));
        }
    }
    Ok(())
}

/// The same comparison with `F_{rho,delta} f_{sqrt r}` computed on the
/// original grid and resampled by `dilate_field`, restricted to nodes whose
/// image stays inside the box.
fn interpolated(
    config: &ExperimentConfig,
    phi: &BumpFunction,
    field: TestField,
    r: f64,
    grid: &SpectralGrid,
    direct: &SampledField,
) -> Result<f64> {
    let spec = config.grid;
    let s = r.sqrt();
    let c = cache(config, &field.sample_dilated(spec, s), grid)?;
    let g = multiplier_op(&c, phi, RHO, config.riesz.delta, 1.0)?.dilate_field(1.0 / s)?;
    let shrink = (s.min(1.0), r.min(1.0));
    let mask = SampledField::interior_mask(&spec, shrink.0, shrink.1);
    let diff = g.sub(direct)?.lp_norm_masked(2.0, &mask)?;
    Ok(diff / direct.lp_norm_masked(2.0, &mask)?)
}

fn sup_over_k(config: &ExperimentConfig, c: &SpectralCache, phi: &BumpFunction, delta: f64) -> Result<SampledField> {
    let mut best = vec![0.0f64; c.spec().len()];
    for k in config.maximal.ks() {
        let d = square_fn(c, phi, delta, k, &config.maximal)?;
        for (b, v) in best.iter_mut().zip(d.values()) {
            *b = b.max(v.re);
        }
    }
    SampledField::from_values(*c.spec(), best.into_iter().map(|b| Complex64::new(b, 0.0)).collect())
}

/// Corollary exponent: `||sup_k D|| <= C delta^{-[(b - 1/2)(1 - 2/p) - 1/p]}`.
fn corollary_exponent(b: f64, p: f64) -> f64 {
    let inv = if p.is_infinite() { 0.0 } else { 1.0 / p };
    -((b - 0.5) * (1.0 - 2.0 * inv) - inv)
}

fn scaling_rows(config: &ExperimentConfig, phi: &BumpFunction, report: &mut ExperimentReport) -> Result<()> {
    let spec = config.grid;
    let grid = config.spectral.build(spec.n)?;
    let deltas = exponents_to_values(config.sweep_list("delta_exponents")?, 2.0);
    let ps = config.sweep_list("p_values")?;
    let l2_min = config.tolerance("l2_slope_min")?;
    let slack = config.tolerance("slope_slack")?;
    let factor = config.tolerance("continuum_factor")?;
    let b = config.riesz.b;
    for field in test_family(config.seed) {
        let f = field.sample(spec);
        let c = cache(config, &f, &grid)?;
        let mut ratios = vec![Vec::new(); ps.len()];
        let mut continuum = Vec::new();
        for &delta in &deltas {
            let sup = sup_over_k(config, &c, phi, delta)?;
            for (i, &p) in ps.iter().enumerate() {
                let ratio = sup.lp_norm(p)? / f.lp_norm(p)?;
                ratios[i].push(ratio);
                report.push(
                    Row::new("square/norm")
                        .param("field", field.name())
                        .param("delta", delta)
                        .param("p", p)
                        .measure("norm_ratio", ratio),
                );
            }
            let cont = square_fn_continuum(&c, phi, delta, CONTINUUM_ORDER)?.lp_norm(2.0)?;
            let latt = square_fn_lattice(&c, phi, delta)?.lp_norm(2.0)?;
            let f2 = f.lp_norm(2.0)?;
            continuum.push(cont / f2);
            let q = cont / latt;
            report.push(
                Row::new("square/continuum")
                    .param("field", field.name())
                    .param("delta", delta)
                    .measure("continuum_ratio", cont / f2)
                    .measure("lattice_ratio", latt / f2)
                    .measure("quotient", q)
                    .check(q <= factor && q >= 1.0 / factor),
            );
        }
        for (i, &p) in ps.iter().enumerate() {
            let bound = if p == 2.0 { l2_min } else { corollary_exponent(b, p) - slack };
            let row = Row::new("square/slope")
                .param("field", field.name())
                .param("p", p)
                .param("b", b)
                .measure("bound", bound);
            report.push(slope_row(row, log_slope(&deltas, &ratios[i]), |s| s >= bound));
        }
        let row = Row::new("square/continuum-slope")
            .param("field", field.name())
            .param("p", 2.0)
            .measure("bound", l2_min);
        report.push(slope_row(row, log_slope(&deltas, &continuum), |s| s >= l2_min));
    }
    Ok(())
}
