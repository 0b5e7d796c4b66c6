//! Configuration, runners and CSV reports for the numerical experiments.
//!
//! Every runner is a pure function of its [`ExperimentConfig`]: reductions
//! run in a fixed order, so the same config reproduces the same CSV bytes.

mod config;
mod converge;
mod decomp;
mod family;
mod kernel_decay;
mod plancherel;
mod report;
mod square;

pub use config::{Experiment, ExperimentConfig};
pub use converge::run_convergence;
pub use decomp::run_decomposition;
pub use family::{test_family, TestField};
pub use kernel_decay::run_kernel_decay;
pub use plancherel::run_plancherel;
pub use report::{emit_csv, format_float, summary, ExperimentReport, Outcome, Param, Provenance, Row};
pub use square::run_square_scaling;

use crate::error::{Error, Result};
use crate::field::{GridSpec, SampledField};
use crate::quadrature::fit_slope;
use crate::spectral::{SpectralCache, SpectralGrid};

/// Runs one experiment.
pub fn run(kind: Experiment, config: &ExperimentConfig) -> Result<ExperimentReport> {
    match kind {
        Experiment::Plancherel => run_plancherel(config),
        Experiment::Converge => run_convergence(config),
        Experiment::SquareScaling => run_square_scaling(config),
        Experiment::KernelDecay => run_kernel_decay(config),
        Experiment::Decomp => run_decomposition(config),
    }
}

/// `P_lambda f` on every node, refusing caches above the configured cap.
fn cache(config: &ExperimentConfig, f: &SampledField, grid: &SpectralGrid) -> Result<SpectralCache> {
    SpectralCache::build_capped(f, grid, config.memory_cap)
}

fn check_memory(config: &ExperimentConfig, spec: &GridSpec, fields: usize) -> Result<()> {
    let need = spec.field_bytes().saturating_mul(fields);
    if need > config.memory_cap {
        return Err(Error::Config(format!(
            "grid {}x{} needs about {need} bytes of working fields, cap is {}",
            spec.m_z, spec.m_t, config.memory_cap
        )));
    }
    Ok(())
}

/// `||a - b||_p / ||b||_p`, or the absolute difference when `b = 0`.
fn relative(a: &SampledField, b: &SampledField, p: f64) -> Result<f64> {
    let diff = a.sub(b)?.lp_norm(p)?;
    let base = b.lp_norm(p)?;
    Ok(if base > 0.0 { diff / base } else { diff })
}

/// Least-squares slope of `log y` against `log x`; `None` with fewer than two
/// usable points.
fn log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .unzip();
    if lx.len() < 2 {
        return None;
    }
    fit_slope(&lx, &ly)
}

/// A slope row: checked against `ok` when the fit exists, flagged otherwise.
fn slope_row(row: Row, slope: Option<f64>, ok: impl Fn(f64) -> bool) -> Row {
    match slope {
        Some(s) => row.measure("slope", s).check(ok(s)),
        None => row.param("note", "insufficient points"),
    }
}

fn exponents_to_values(exps: &[f64], base: f64) -> Vec<f64> {
    exps.iter().map(|&e| base.powf(-e)).collect()
}
