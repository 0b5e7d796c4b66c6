use num_complex::Complex64;

use super::{log_slope, slope_row, ExperimentConfig, ExperimentReport, Row};
use crate::error::Result;
use crate::hgroup::GroupPoint;
use crate::riesz::{riesz_kernel, KernelQuadrature};

/// The point on the ray of angle `theta` at homogeneous norm `r`:
/// `|z| = 2 sqrt(cos theta) r`, `t = sin theta r^2`.
fn ray_point(n: usize, theta: f64, r: f64) -> Result<GroupPoint> {
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    z[0] = Complex64::new(2.0 * theta.cos().max(0.0).sqrt() * r, 0.0);
    GroupPoint::new(&z, theta.sin() * r * r)
}

/// Far-field decay and `lambda`-prefactor of `R_lambda^{2m+1}`, and the
/// identity `d/dt (t^m R_t^m) = m t^{m-1} R_t^{m-1}`.
pub fn run_kernel_decay(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(config.hash());
    let riesz = config.riesz;
    let n = riesz.n;
    let m = riesz.m() as u32;
    let l = 2 * m + 1;
    let q = riesz.q() as f64;
    let slack = config.tolerance("slope_slack")?;
    let far = KernelQuadrature {
        k_max: config.tolerance("kernel_k_max")? as usize,
        richardson: true,
    };
    let lambda = 1.0;

    let radii = config.sweep_list("far_r")?;
    let angles = config.sweep_list("ray_angles")?;
    let mut envelope = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut env: f64 = 0.0;
        for &theta in angles {
            env = env.max(riesz_kernel(lambda, l, &ray_point(n, theta, r)?, far)?.norm());
        }
        envelope.push(env);
        report.push(
            Row::new("kernel/far-field")
                .param("lambda", lambda)
                .param("l", l as usize)
                .param("norm", r)
                .measure("envelope", env),
        );
    }
    let abscissa: Vec<f64> = radii.iter().map(|r| 1.0 + lambda.sqrt() * r).collect();
    let bound = -2.0 * m as f64 + slack;
    let row = Row::new("kernel/decay-slope")
        .param("lambda", lambda)
        .param("l", l as usize)
        .param("k_max", far.k_max)
        .measure("bound", bound);
    report.push(slope_row(row, log_slope(&abscissa, &envelope), |s| s <= bound));

    let lambdas = config.sweep_list("prefactor_lambda")?;
    let origin = GroupPoint::identity(n);
    let mut values = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        let v = riesz_kernel(lam, l, &origin, far)?.re;
        values.push(v.abs());
        report.push(
            Row::new("kernel/origin")
                .param("lambda", lam)
                .param("l", l as usize)
                .measure("value", v)
                .check(v > 0.0),
        );
    }
    let pre_slack = config.tolerance("prefactor_slack")?;
    let row = Row::new("kernel/prefactor-slope")
        .param("l", l as usize)
        .measure("target", q / 2.0);
    report.push(slope_row(row, log_slope(lambdas, &values), |s| (s - q / 2.0).abs() <= pre_slack));

    // The identity holds term by term in k, so plain truncation suffices.
    let id_quad = KernelQuadrature {
        k_max: config.tolerance("identity_k_max")? as usize,
        richardson: false,
    };
    let tol = config.tolerance("identity_rel")?;
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    z[0] = Complex64::new(0.5, 0.3);
    let omega = GroupPoint::new(&z, 0.7)?;
    let mf = m as f64;
    for &t in config.sweep_list("identity_t")? {
        let g = |s: f64| riesz_kernel(s, m, &omega, id_quad).map(|v| s.powf(mf) * v.re);
        let h = 1e-2 * t;
        let d = (-g(t + 2.0 * h)? + 8.0 * g(t + h)? - 8.0 * g(t - h)? + g(t - 2.0 * h)?) / (12.0 * h);
        let rhs = mf * t.powf(mf - 1.0) * riesz_kernel(t, m - 1, &omega, id_quad)?.re;
        let rel = (d - rhs).abs() / rhs.abs();
        report.push(
            Row::new("kernel/identity")
                .param("t", t)
                .param("m", m as usize)
                .measure("derivative", d)
                .measure("rhs", rhs)
                .measure("rel_error", rel)
                .check(rel <= tol),
        );
    }
    Ok(report)
}
