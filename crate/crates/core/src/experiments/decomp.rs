use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ExperimentConfig, ExperimentReport, Row};
use crate::bump::{
    make_lp_beta, make_riesz_splitting, make_unity_partition, splitting_residual, taylor_reconstruct,
    verify_sigma_support, BumpFunction, TaylorPoint,
};
use crate::error::Result;

/// Samples for the splitting and partition residuals.
const GRID_SAMPLES: usize = 4000;

/// `max |sum_{l=-3}^{3} phi(t + l) - 1|` over `t` in `[-1, 1]`.
fn partition_residual(phi: &BumpFunction, samples: usize) -> f64 {
    (0..=samples)
        .map(|i| {
            let t = -1.0 + 2.0 * i as f64 / samples as f64;
            ((-3..=3).map(|l| phi.value(t + l as f64)).sum::<f64>() - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// `max |sum_{m=-8}^{8} beta(2^{-m} t) - 1|` over `log_2 t` in `[-6, 6]`.
fn lp_residual(beta: &BumpFunction, samples: usize) -> f64 {
    (0..=samples)
        .map(|i| {
            let t = 2f64.powf(-6.0 + 12.0 * i as f64 / samples as f64);
            ((-8..=8).map(|m| beta.value(2f64.powi(-m) * t)).sum::<f64>() - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Splitting, partition, sigma-support and Taylor-regrouping checks for the
/// cutoffs of the bilinear decomposition.
pub fn run_decomposition(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(config.hash());
    let order = 2 * config.riesz.m() + 2;
    let depth = config.tolerance("splitting_depth")? as i32;
    let part_tol = config.tolerance("partition")?;

    for &alpha in config.sweep_list("alphas")? {
        let (psi, psi0) = make_riesz_splitting(alpha, order);
        let t_max = 1.0 - 2f64.powi(-10);
        let res = splitting_residual(&psi, &psi0, alpha, depth, t_max, GRID_SAMPLES);
        let bound = 2.0 * 2f64.powf(-(depth as f64) * alpha);
        report.push(
            Row::new("decomp/splitting")
                .param("alpha", alpha)
                .param("depth", depth)
                .measure("residual", res)
                .measure("bound", bound)
                .check(res <= bound),
        );
    }

    let phi = make_unity_partition(order);
    let res = partition_residual(&phi, GRID_SAMPLES);
    report.push(Row::new("decomp/unity-partition").measure("residual", res).check(res <= part_tol));
    let beta = make_lp_beta(order);
    let res = lp_residual(&beta, GRID_SAMPLES);
    report.push(Row::new("decomp/lp-partition").measure("residual", res).check(res <= part_tol));

    let (psi, _) = make_riesz_splitting(config.riesz.alpha, order);
    let cutoff = config.bump.build(order);
    let samples = config.tolerance("sigma_samples")? as usize;
    let kappa = config.riesz.kappa;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for delta in [config.riesz.delta.min(0.125), 0.25] {
        let rep = verify_sigma_support(&psi, &cutoff, delta, kappa, samples, &mut rng);
        report.push(
            Row::new("decomp/sigma-support")
                .param("delta", delta)
                .param("kappa", kappa)
                .param("samples", rep.samples)
                .measure("violations", rep.violations as f64)
                .measure("max_violation", rep.max_violation)
                .measure("witnesses", rep.witnesses as f64)
                .check(rep.violations == 0 && rep.witnesses > 0),
        );
    }

    // A separate stream, so the Taylor points do not depend on how many
    // draws the support check made.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);
    taylor_rows(config, &psi, &mut rng, &mut report)?;
    Ok(report)
}

/// Truncation error of the Taylor regrouping against `N_max`, at random
/// points where both `phi` factors are nonzero.
fn taylor_rows(
    config: &ExperimentConfig,
    psi: &BumpFunction,
    rng: &mut ChaCha8Rng,
    report: &mut ExperimentReport,
) -> Result<()> {
    let delta = config.tolerance("taylor_delta")?;
    let kappa = config.riesz.kappa;
    let points = config.tolerance("taylor_points")? as usize;
    let orders: Vec<usize> = config.sweep_list("taylor_orders")?.iter().map(|&o| o as usize).collect();
    let dt = delta.powf(1.0 + kappa);
    let (lo, hi) = psi.support();
    let mut worst = vec![0.0f64; orders.len()];
    let mut non_monotone = 0usize;
    for _ in 0..points {
        let s0 = rng.gen_range(lo..hi);
        let sigma = 1.0 - delta * s0;
        let u1 = rng.gen_range(0.0..sigma);
        let rho = u1 + dt * rng.gen_range(-1.0..1.0);
        let u2 = sigma - rho - dt * rng.gen_range(-1.0..1.0);
        let p = TaylorPoint { sigma, rho, u1, u2 };
        let errs: Vec<f64> = orders
            .iter()
            .map(|&n| {
                let (t, e) = taylor_reconstruct(psi, delta, kappa, n, p);
                (t - e).abs()
            })
            .collect();
        if errs.windows(2).any(|w| w[1] > w[0]) {
            non_monotone += 1;
        }
        for (w, e) in worst.iter_mut().zip(&errs) {
            *w = w.max(*e);
        }
    }
    for (&n, &w) in orders.iter().zip(&worst) {
        report.push(
            Row::new("decomp/taylor")
                .param("n_max", n)
                .param("delta", delta)
                .param("kappa", kappa)
                .measure("max_error", w),
        );
    }
    report.push(
        Row::new("decomp/taylor-monotone")
            .param("delta", delta)
            .param("kappa", kappa)
            .param("points", points)
            .measure("max_error_last", *worst.last().unwrap_or(&f64::NAN))
            .check(worst.windows(2).all(|w| w[1] < w[0])),
    );
    report.push(
        Row::new("decomp/taylor-pointwise")
            .param("delta", delta)
            .param("kappa", kappa)
            .param("points", points)
            .measure("non_monotone_points", non_monotone as f64),
    );
    Ok(())
}
