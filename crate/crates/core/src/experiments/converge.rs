use super::{cache, exponents_to_values, test_family, ExperimentConfig, ExperimentReport, Row};
use crate::error::Result;
use crate::field::{GridSpec, SampledField};
use crate::riesz::{bilinear_riesz, maximal_bilinear};

/// `||S_r^alpha(f, g) - f g||_p` along dyadic `r`, and the maximal-operator
/// norm ratio across the test family (with `g = f`).
pub fn run_convergence(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(config.hash());
    let spec = config.grid;
    let grid = config.spectral.build(spec.n)?;
    let riesz = config.riesz;
    let (p, p1, p2) = (riesz.p(), riesz.p1, riesz.p2);
    let alpha = riesz.alpha;
    let rs = exponents_to_values(config.sweep_list("r_exponents")?, 2.0);
    let steps = config.tolerance("monotone_steps")? as usize;
    let spread_max = config.tolerance("family_spread")?;
    let controls = config.sweep_list("alpha_control")?;

    let tiny = GridSpec { m_z: 8, m_t: 8, ..spec };
    let zero = cache(config, &SampledField::zeros(tiny), &grid.with_k_max(2))?;
    let worst = rs
        .iter()
        .map(|&r| bilinear_riesz(&zero, &zero, alpha, r).and_then(|s| s.lp_norm(p)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    report.push(Row::new("converge/zero").param("alpha", alpha).measure("max_error", worst).check(worst == 0.0));

    let mut ratios = Vec::new();
    for field in test_family(config.seed) {
        let f = field.sample(spec);
        let c = cache(config, &f, &grid)?;
        let product = f.mul(&f)?;
        let base = product.lp_norm(p)?;
        for (a, checked) in std::iter::once((alpha, true)).chain(controls.iter().map(|&a| (a, false))) {
            let mut errors = Vec::with_capacity(rs.len());
            for &r in &rs {
                let err = bilinear_riesz(&c, &c, a, r)?.sub(&product)?.lp_norm(p)?;
                errors.push(err);
                report.push(
                    Row::new("converge/error")
                        .param("field", field.name())
                        .param("alpha", a)
                        .param("r", r)
                        .param("p", p)
                        .measure("error", err)
                        .measure("rel_error", err / base),
                );
            }
            let tail = &errors[errors.len().saturating_sub(steps + 1)..];
            let row = Row::new("converge/monotone")
                .param("field", field.name())
                .param("alpha", a)
                .param("steps", steps)
                .measure("last_error", *tail.last().unwrap_or(&f64::NAN));
            let row = if !checked {
                row
            } else if tail.len() < steps + 1 {
                row.param("note", "insufficient points")
            } else {
                row.check(tail.windows(2).all(|w| w[1] < w[0]))
            };
            report.push(row);
        }
        let sup = maximal_bilinear(&c, &c, alpha, &config.maximal)?;
        let ratio = sup.lp_norm(p)? / (f.lp_norm(p1)? * f.lp_norm(p2)?);
        ratios.push(ratio);
        report.push(
            Row::new("converge/maximal")
                .param("field", field.name())
                .param("alpha", alpha)
                .param("p1", p1)
                .param("p2", p2)
                .measure("norm_ratio", ratio),
        );
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    report.push(
        Row::new("converge/family")
            .param("alpha", alpha)
            .param("members", ratios.len())
            .measure("min_ratio", lo)
            .measure("max_ratio", hi)
            .measure("spread", hi / lo)
            .check(hi / lo <= spread_max),
    );
    Ok(report)
}
