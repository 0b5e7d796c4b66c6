use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::rc::Rc;

use num_complex::Complex64;

use crate::bump::BumpFunction;
use crate::error::{Error, Result};
use crate::hgroup::GroupPoint;
use crate::spectral::laguerre_fn_r2;

/// Truncation of the Laguerre sum behind the kernel evaluators.
///
/// Each `k` term is of size `(2k+n)^{-n-1}` near the origin, so plain
/// truncation at `K` leaves an `O(1/K)` tail. With `richardson` set the
/// result is `2 S_{2K} - S_K`, which removes that leading term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelQuadrature {
    pub k_max: usize,
    pub richardson: bool,
}

impl Default for KernelQuadrature {
    fn default() -> Self {
        Self {
            k_max: 256,
            richardson: true,
        }
    }
}

type Rule = Rc<(Vec<f64>, Vec<f64>)>;

thread_local! {
    static RULES: RefCell<HashMap<usize, Rule>> = RefCell::new(HashMap::new());
}

fn rule(n: usize) -> Rule {
    RULES.with(|cell| {
        cell.borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                let (x, w) = crate::quadrature::gauss_legendre(n);
                Rc::new((x, w))
            })
            .clone()
    })
}

/// `sum_{k <= K} int_lo^hi weight(c, mu) 2 cos(mu s) phi_k(sqrt(mu) z) mu^n dmu`
/// with `c = 2k + n` and `(lo, hi) = window(c)`. The Gauss-Legendre order
/// per term follows the oscillation `mu (|s| + |z|^2)` over the window.
fn laguerre_sum(
    n: usize,
    k_max: usize,
    z2: f64,
    s: f64,
    window: &impl Fn(f64) -> Option<(f64, f64)>,
    weight: &impl Fn(f64, f64) -> f64,
) -> f64 {
    let mut total = 0.0;
    for k in 0..=k_max {
        let c = (2 * k + n) as f64;
        let Some((lo, hi)) = window(c) else { continue };
        if hi <= lo {
            continue;
        }
        let count = (2.0 * (hi - lo) * (s.abs() + z2)).max(24.0) as usize + 24;
        let rule = rule(count);
        let (half, mid) = (0.5 * (hi - lo), 0.5 * (hi + lo));
        let mut term = 0.0;
        for (x, w) in rule.0.iter().zip(&rule.1) {
            let mu = mid + half * x;
            term += w * weight(c, mu) * 2.0 * (mu * s).cos() * laguerre_fn_r2(k, n, mu * z2) * mu.powi(n as i32);
        }
        total += half * term;
    }
    total * (2.0 * PI).powi(-(n as i32) - 1)
}

fn extrapolated(quad: KernelQuadrature, eval: impl Fn(usize) -> f64) -> f64 {
    if quad.richardson {
        2.0 * eval(2 * quad.k_max) - eval(quad.k_max)
    } else {
        eval(quad.k_max)
    }
}

/// The kernel `R_t^l(omega)` of `f -> int_0^t (1 - lambda/t)^l P_lambda f dmu(lambda)`,
/// summed over both signs of the frequency.
///
/// After the substitution `mu = lambda / (2k+n)` each Laguerre term is
/// `(2 pi)^{-n-1} int_0^{t/c} (1 - c mu/t)^l 2 cos(mu s) phi_k(sqrt(mu) z) mu^n dmu`.
pub fn riesz_kernel(t: f64, l: u32, omega: &GroupPoint, quad: KernelQuadrature) -> Result<Complex64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::NonPositiveScale(t));
    }
    let n = omega.n();
    let l_max = 2 * (n + 2) + 1;
    if l as usize > l_max {
        return Err(Error::InvalidParameter(format!("order l = {l} exceeds 2m+1 = {l_max}")));
    }
    let (z2, s) = (omega.z_norm_sqr(), omega.t());
    let window = |c: f64| Some((0.0, t / c));
    let weight = |c: f64, mu: f64| (1.0 - c * mu / t).max(0.0).powi(l as i32);
    let value = extrapolated(quad, |k| laguerre_sum(n, k, z2, s, &window, &weight));
    Ok(Complex64::new(value, 0.0))
}

/// The kernel of `F_{rho,delta,r}^phi`, symmetrized over `±|lambda|`:
/// `sum_k (2 pi)^{-n-1} int phi((rho - r c mu)/delta) 2 cos(mu s) phi_k(sqrt(mu) z) mu^n dmu`.
pub fn multiplier_kernel(
    phi: &BumpFunction,
    rho: f64,
    delta: f64,
    r: f64,
    omega: &GroupPoint,
    quad: KernelQuadrature,
) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveScale(r));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let n = omega.n();
    let (a, b) = phi.support();
    let (z2, s) = (omega.z_norm_sqr(), omega.t());
    // phi((rho - r c mu)/delta) != 0 only for r c mu in (rho - b delta, rho - a delta)
    let window = |c: f64| {
        let hi = (rho - a * delta) / (r * c);
        (hi > 0.0).then(|| (((rho - b * delta) / (r * c)).max(0.0), hi))
    };
    let weight = |c: f64, mu: f64| phi.value((rho - r * c * mu) / delta);
    let value = extrapolated(quad, |k| laguerre_sum(n, k, z2, s, &window, &weight));
    Ok(Complex64::new(value, 0.0))
}
