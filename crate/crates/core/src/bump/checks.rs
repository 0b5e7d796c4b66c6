use rand::Rng;

use super::BumpFunction;

/// `max |(1 - t)^alpha - sum_{d = 2^k, -depth <= k <= -2} d^alpha psi((1 - t)/d) - psi_0(t)|`
/// over `samples` uniform points of `[0, t_max]`.
pub fn splitting_residual(
    psi: &BumpFunction,
    psi0: &BumpFunction,
    alpha: f64,
    depth: i32,
    t_max: f64,
    samples: usize,
) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..=samples {
        let t = t_max * i as f64 / samples as f64;
        let mut s = psi0.value(t);
        for k in 2..=depth {
            let d = 2f64.powi(-k);
            s += d.powf(alpha) * psi.value((1.0 - t) / d);
        }
        worst = worst.max(((1.0 - t).powf(alpha) - s).abs());
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaReport {
    pub samples: usize,
    /// Samples with `sigma` outside `[1 - 4 delta, 1 + 2 delta]` and a nonzero product.
    pub violations: usize,
    pub max_violation: f64,
    /// Samples with `sigma` inside the window and a nonzero product.
    pub witnesses: usize,
}

/// Samples `(u_1, u_2, rho, sigma)`, with `u_i` standing for `r lambda_i`, and checks that
/// `phi((rho - r lambda_1)/dt) phi((sigma - rho - r lambda_2)/dt) psi((1 - r lambda_1 - r lambda_2)/delta)`
/// vanishes for `sigma` outside `[1 - 4 delta, 1 + 2 delta]`, `dt = delta^{1+kappa}`.
///
/// Half of the samples are uniform in a box around the window; the other half
/// are placed where all three factors can be nonzero, with `sigma` pushed to
/// the edge of what the supports allow.
pub fn verify_sigma_support(
    psi: &BumpFunction,
    phi: &BumpFunction,
    delta: f64,
    kappa: f64,
    samples: usize,
    rng: &mut impl Rng,
) -> SigmaReport {
    let dt = delta.powf(1.0 + kappa);
    let (lo, hi) = (1.0 - 4.0 * delta, 1.0 + 2.0 * delta);
    let (plo, phi_hi) = phi.support();
    let (slo, shi) = psi.support();
    let mut report = SigmaReport {
        samples,
        violations: 0,
        max_violation: 0.0,
        witnesses: 0,
    };
    for i in 0..samples {
        let (u1, u2, rho, sigma) = if i % 2 == 0 {
            let u1 = rng.gen_range(-0.5..2.0);
            let u2 = rng.gen_range(-0.5..2.0);
            let rho = rng.gen_range(-0.5..2.0);
            let sigma = rng.gen_range(lo - 1.0..hi + 1.0);
            (u1, u2, rho, sigma)
        } else {
            // 1 - u1 - u2 = delta * s with s in supp psi
            let s = rng.gen_range(slo..shi);
            let total = 1.0 - delta * s;
            let u1 = rng.gen_range(0.0..total);
            let u2 = total - u1;
            let a = rng.gen_range(plo..phi_hi);
            let b = match rng.gen_range(0..3) {
                0 => plo + 1e-9,
                1 => phi_hi - 1e-9,
                _ => rng.gen_range(plo..phi_hi),
            };
            let rho = u1 + dt * a;
            let sigma = rho + u2 + dt * b;
            (u1, u2, rho, sigma)
        };
        let prod = phi.value((rho - u1) / dt) * phi.value((sigma - rho - u2) / dt) * psi.value((1.0 - u1 - u2) / delta);
        if prod != 0.0 {
            if sigma < lo || sigma > hi {
                report.violations += 1;
                report.max_violation = report.max_violation.max(prod.abs());
            } else {
                report.witnesses += 1;
            }
        }
    }
    report
}

/// A point of the Taylor regrouping: `u_i` stands for `r lambda_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorPoint {
    pub sigma: f64,
    pub rho: f64,
    pub u1: f64,
    pub u2: f64,
}

/// Expands `psi((1 - u_1 - u_2)/delta)` around `(1 - sigma)/delta`:
///
/// `sum_{N <= n_max} sum_{a + b = N} c_{a,b} / N! psi^{(N)}((1 - sigma)/delta)
///   ((rho - u_1)/dt * d)^a ((sigma - rho - u_2)/dt * d)^b`
///
/// with `dt = delta^{1+kappa}`, `d = dt / delta = delta^kappa` and
/// `c_{a,b} = N!/(a! b! (N-a-b)!)`, the multinomial coefficient; only
/// `a + b = N` survives at order `N`, which is what the multinomial theorem
/// gives for `(A + B)^N`. Returns `(truncated, exact)`.
pub fn taylor_reconstruct(psi: &BumpFunction, delta: f64, kappa: f64, n_max: usize, p: TaylorPoint) -> (f64, f64) {
    let dt = delta.powf(1.0 + kappa);
    let d = delta.powf(kappa);
    let a_disp = (p.rho - p.u1) / dt * d;
    let b_disp = (p.sigma - p.rho - p.u2) / dt * d;
    let derivs = psi.derivatives((1.0 - p.sigma) / delta, n_max);
    let mut fact = vec![1.0f64; n_max + 1];
    for j in 1..=n_max {
        fact[j] = fact[j - 1] * j as f64;
    }
    let mut total = 0.0;
    for (order, dn) in derivs.iter().enumerate() {
        let mut level = 0.0;
        for a in 0..=order {
            let b = order - a;
            let c = fact[order] / (fact[a] * fact[b]);
            level += c * a_disp.powi(a as i32) * b_disp.powi(b as i32);
        }
        total += dn * level / fact[order];
    }
    (total, psi.value((1.0 - p.u1 - p.u2) / delta))
}

#[cfg(test)]
mod tests {
    use super::super::{make_riesz_splitting, make_standard_bump};
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn zero_displacement_is_exact() {
        let (psi, _) = make_riesz_splitting(1.0, 8);
        let p = TaylorPoint {
            sigma: 0.9,
            rho: 0.4,
            u1: 0.4,
            u2: 0.5,
        };
        let (t, e) = taylor_reconstruct(&psi, 1.0 / 16.0, 2.0, 0, p);
        assert!((t - psi.value(0.1 * 16.0)).abs() < 1e-15);
        assert!((t - e).abs() < 1e-15);
    }

    #[test]
    fn sigma_far_away_never_fires() {
        let (psi, _) = make_riesz_splitting(1.0, 8);
        let phi = make_standard_bump(-1.0, 1.0, 8);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let rep = verify_sigma_support(&psi, &phi, 0.25, 1.0, 20_000, &mut rng);
        assert_eq!(rep.violations, 0);
        assert!(rep.witnesses > 0);
    }
}
