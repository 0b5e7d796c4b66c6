use num_complex::Complex64;

use super::{check_memory, ExperimentConfig, ExperimentReport, Row, TestField};
use crate::error::Result;
use crate::field::{GridSpec, SampledField};
use crate::spectral::{plancherel_check, plancherel_terms, spectral_piece};

/// Plancherel identity against the Laguerre truncation `K`, and second-order
/// convergence of the eigenfunction residual under grid refinement.
pub fn run_plancherel(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(config.hash());
    let spec = config.grid;
    // f, f^mu planes and one twisted-convolution output.
    check_memory(config, &spec, 4)?;
    let k_values: Vec<usize> = config.sweep_list("k_values")?.iter().map(|&k| k as usize).collect();
    let k_top = k_values.iter().copied().max().unwrap_or(0);
    let grid = config.spectral.build(spec.n)?.with_k_max(k_top);
    let tol = config.tolerance("plancherel_rel")?;
    let halving = config.tolerance("halving_ratio")?;

    let tiny = GridSpec { m_z: 8, m_t: 8, ..spec };
    let (lhs, rhs) = plancherel_check(&SampledField::zeros(tiny), &grid.with_k_max(2))?;
    report.push(
        Row::new("plancherel/zero")
            .param("m_z", tiny.m_z)
            .param("m_t", tiny.m_t)
            .measure("lhs", lhs)
            .measure("rhs", rhs)
            .check(lhs == 0.0 && rhs == 0.0),
    );

    for field in [TestField::Hermite, TestField::Gaussian] {
        let terms = plancherel_terms(&field.sample(spec), &grid)?;
        let mut errors = Vec::new();
        for &k in &k_values {
            let err = terms.relative_error(k);
            errors.push(err);
            report.push(
                Row::new("plancherel/sweep")
                    .param("field", field.name())
                    .param("k_max", k)
                    .param("m_z", spec.m_z)
                    .param("m_t", spec.m_t)
                    .param("lambda_nodes", grid.len())
                    .measure("lhs", terms.lhs)
                    .measure("rhs", terms.rhs(k))
                    .measure("rel_error", err)
                    .measure("rel_error_box", terms.relative_error_box(k))
                    .check(err <= tol),
            );
        }
        for (pair, ks) in errors.windows(2).zip(k_values.windows(2)) {
            let ratio = pair[0] / pair[1];
            report.push(
                Row::new("plancherel/halving")
                    .param("field", field.name())
                    .param("k_from", ks[0])
                    .param("k_to", ks[1])
                    .measure("ratio", ratio)
                    .check(ratio >= halving),
            );
        }
    }

    eigen_rows(config, &mut report)?;
    Ok(report)
}

/// `||L(f * e_k^lambda) - (2k+n)|lambda| f * e_k^lambda|| / ||f * e_k^lambda||`
/// on interior nodes, at each resolution of the sweep.
fn eigen_rows(config: &ExperimentConfig, report: &mut ExperimentReport) -> Result<()> {
    let resolutions = config.sweep_list("resolutions")?;
    let ratio_min = config.tolerance("eigen_ratio")?;
    let frac = config.tolerance("interior_fraction")?;
    let n = config.grid.n;
    for &k in config.sweep_list("eigen_k")? {
        let k = k as usize;
        for &lambda in config.sweep_list("eigen_lambda")? {
            let mut residuals = Vec::new();
            for &m in resolutions {
                let m = m as usize;
                let spec = GridSpec::new(n, config.grid.extent_z, config.grid.extent_t, m, m)?;
                check_memory(config, &spec, 4)?;
                let piece = spectral_piece(&TestField::Gaussian.sample(spec), k, lambda)?;
                let eig = (2 * k + n) as f64 * lambda;
                let resid = piece
                    .apply_sublaplacian()
                    .combine(Complex64::new(1.0, 0.0), &piece, Complex64::new(-eig, 0.0))?;
                let mask = SampledField::interior_mask(&spec, frac, frac);
                let rel = resid.lp_norm_masked(2.0, &mask)? / piece.lp_norm_masked(2.0, &mask)?;
                residuals.push(rel);
                report.push(
                    Row::new("plancherel/eigen")
                        .param("k", k)
                        .param("lambda", lambda)
                        .param("m", m)
                        .measure("residual", rel),
                );
            }
            for (pair, ms) in residuals.windows(2).zip(resolutions.windows(2)) {
                let ratio = pair[0] / pair[1];
                report.push(
                    Row::new("plancherel/eigen-ratio")
                        .param("k", k)
                        .param("lambda", lambda)
                        .param("m_from", ms[0] as usize)
                        .param("m_to", ms[1] as usize)
                        .measure("ratio", ratio)
                        .check(ratio >= ratio_min),
                );
            }
        }
    }
    Ok(())
}
