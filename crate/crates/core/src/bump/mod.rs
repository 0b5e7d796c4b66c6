//! Smooth cutoffs built from the mollifier `e^{-1/(1-s^2)}`: standard bumps,
//! the unity partition `phi`, the dyadic bump `beta`, the Riesz splitting
//! `(psi, psi_0)` and the derived `t^b phi`. Every function is evaluated as a
//! Taylor jet, so derivatives of any order are exact up to rounding.

mod checks;
mod jet;

pub use checks::{
    splitting_residual, taylor_reconstruct, verify_sigma_support, SigmaReport, TaylorPoint,
};
pub use jet::Jet;

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::quadrature::gauss_legendre;

#[derive(Debug)]
enum Expr {
    /// `e^{-1/(1-s^2)}` on `(-1, 1)`, zero elsewhere.
    Mollifier,
    /// Smooth step rising from 0 to 1 on `[-w, w]`.
    Step(f64),
    /// `inner(a x + b)`
    Affine(Arc<Expr>, f64, f64),
    Scale(Arc<Expr>, f64),
    Sum(Vec<Arc<Expr>>),
    Product(Arc<Expr>, Arc<Expr>),
    /// `x^alpha` for `x > 0`, zero otherwise.
    Power(f64),
    /// `x^b`
    Monomial(u32),
    /// `inner(log_2 x)` for `x > 0`, zero otherwise.
    Log2(Arc<Expr>),
}

/// Exponent below which the mollifier is flushed to zero.
const EXP_FLOOR: f64 = -700.0;

impl Expr {
    fn jet(&self, x: f64, order: usize) -> Jet {
        match self {
            Expr::Mollifier => mollifier_jet(x, order),
            Expr::Step(w) => step_jet(*w, x, order),
            Expr::Affine(inner, a, b) => inner.jet(a * x + b, order).affine_pullback(*a),
            Expr::Scale(inner, c) => inner.jet(x, order).scale(*c),
            Expr::Sum(terms) => terms
                .iter()
                .fold(Jet::zero(order), |acc, t| acc.add(&t.jet(x, order))),
            Expr::Product(a, b) => a.jet(x, order).mul(&b.jet(x, order)),
            Expr::Power(alpha) => {
                if x <= 0.0 {
                    return Jet::zero(order);
                }
                let mut coef = 1.0;
                let mut out = Jet::zero(order);
                for j in 0..=order {
                    out.0[j] = coef * x.powf(alpha - j as f64);
                    coef *= (alpha - j as f64) / (j + 1) as f64;
                }
                out
            }
            Expr::Monomial(b) => {
                let mut out = Jet::zero(order);
                let mut coef = 1.0;
                for j in 0..=order.min(*b as usize) {
                    out.0[j] = coef * x.powi((*b as usize - j) as i32);
                    coef *= (*b as usize - j) as f64 / (j + 1) as f64;
                }
                out
            }
            Expr::Log2(inner) => {
                if x <= 0.0 {
                    return Jet::zero(order);
                }
                let log = Jet::variable(x, order).ln().scale(std::f64::consts::LOG2_E);
                inner.jet(log.value(), order).compose(&log)
            }
        }
    }
}

fn mollifier_jet(s: f64, order: usize) -> Jet {
    if s <= -1.0 || s >= 1.0 {
        return Jet::zero(order);
    }
    let v0 = -1.0 / (1.0 - s * s);
    if v0 < EXP_FLOOR {
        return Jet::zero(order);
    }
    // u = 1 - s^2 as a jet, exponent = -1/u
    let mut u = Jet::zero(order);
    u.0[0] = 1.0 - s * s;
    if order >= 1 {
        u.0[1] = -2.0 * s;
    }
    if order >= 2 {
        u.0[2] = -1.0;
    }
    u.recip().scale(-1.0).exp()
}

const STEP_PANELS: usize = 512;
const STEP_ORDER: usize = 16;

/// Cumulative integrals of the mollifier at the panel edges of `[-1, 1]`.
struct StepTable {
    edges: Vec<f64>,
    total: f64,
    gl: (Vec<f64>, Vec<f64>),
}

fn step_table() -> &'static StepTable {
    static TABLE: OnceLock<StepTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let gl = gauss_legendre(STEP_ORDER);
        let h = 2.0 / STEP_PANELS as f64;
        let mut edges = Vec::with_capacity(STEP_PANELS + 1);
        let mut acc = 0.0;
        edges.push(0.0);
        for p in 0..STEP_PANELS {
            let a = -1.0 + p as f64 * h;
            acc += integrate_mollifier(&gl, a, a + h);
            edges.push(acc);
        }
        StepTable { total: acc, edges, gl }
    })
}

fn integrate_mollifier(gl: &(Vec<f64>, Vec<f64>), a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    gl.0.iter()
        .zip(&gl.1)
        .map(|(x, w)| w * mollifier_jet(a + half * (x + 1.0), 0).value())
        .sum::<f64>()
        * half
}

/// `int_{-1}^{s} m / int_{-1}^{1} m`.
fn normalized_primitive(s: f64) -> f64 {
    if s <= -1.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let t = step_table();
    let h = 2.0 / STEP_PANELS as f64;
    let p = (((s + 1.0) / h) as usize).min(STEP_PANELS - 1);
    let a = -1.0 + p as f64 * h;
    (t.edges[p] + integrate_mollifier(&t.gl, a, s)) / t.total
}

fn step_jet(w: f64, x: f64, order: usize) -> Jet {
    let s = x / w;
    let mut out = Jet::zero(order);
    out.0[0] = normalized_primitive(s);
    if order == 0 || s <= -1.0 || s >= 1.0 {
        return out;
    }
    let m = mollifier_jet(s, order - 1);
    let total = step_table().total;
    let mut winv = 1.0 / w;
    for i in 0..order {
        out.0[i + 1] = m.0[i] * winv / ((i + 1) as f64 * total);
        winv /= w;
    }
    out
}

/// A smooth compactly supported function with exact derivatives.
#[derive(Debug, Clone)]
pub struct BumpFunction {
    expr: Arc<Expr>,
    support: (f64, f64),
    n_max: usize,
    cn_bound: f64,
}

/// Number of samples per unit of support length used for `C^N` bounds.
const CN_SAMPLES: usize = 4000;

impl BumpFunction {
    fn new(expr: Expr, support: (f64, f64), n_max: usize) -> Self {
        let mut b = Self {
            expr: Arc::new(expr),
            support,
            n_max,
            cn_bound: 0.0,
        };
        b.cn_bound = b.sampled_cn_norm(n_max);
        b
    }

    pub fn value(&self, x: f64) -> f64 {
        if x <= self.support.0 || x >= self.support.1 {
            return 0.0;
        }
        self.expr.jet(x, 0).value()
    }

    /// Taylor coefficients at `x` up to `order`.
    pub fn jet(&self, x: f64, order: usize) -> Jet {
        if x <= self.support.0 || x >= self.support.1 {
            return Jet::zero(order);
        }
        self.expr.jet(x, order)
    }

    /// `[f(x), f'(x), ..., f^{(order)}(x)]`.
    pub fn derivatives(&self, x: f64, order: usize) -> Vec<f64> {
        self.jet(x, order).derivatives()
    }

    pub fn derivative(&self, x: f64, j: usize) -> f64 {
        self.derivatives(x, j)[j]
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// Highest derivative order the `C^N` bound covers.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `max_{j <= N} sup |f^{(j)}|`, estimated by dense sampling plus local
    /// refinement around each maximiser.
    pub fn cn_norm_bound(&self) -> f64 {
        self.cn_bound
    }

    /// Membership in `C^N(I)`: support inside `[-1, 1]` and `C^N` norm at most 1.
    pub fn in_cn_class(&self) -> bool {
        self.support.0 >= -1.0 && self.support.1 <= 1.0 && self.cn_bound <= 1.0 + 1e-12
    }

    fn sampled_cn_norm(&self, order: usize) -> f64 {
        let (a, b) = self.support;
        let count = ((b - a) * CN_SAMPLES as f64).ceil().max(CN_SAMPLES as f64) as usize;
        let h = (b - a) / count as f64;
        let mut best = vec![(0.0f64, a); order + 1];
        for i in 1..count {
            let x = a + i as f64 * h;
            for (j, d) in self.derivatives(x, order).into_iter().enumerate() {
                if d.abs() > best[j].0 {
                    best[j] = (d.abs(), x);
                }
            }
        }
        let mut top: f64 = 0.0;
        for (j, &(v, x0)) in best.iter().enumerate() {
            let mut v = v;
            for i in 0..=200 {
                let x = x0 - h + i as f64 * h / 100.0;
                if x > a && x < b {
                    v = v.max(self.derivatives(x, j)[j].abs());
                }
            }
            top = top.max(v);
        }
        top
    }

    fn scaled(&self, c: f64) -> Self {
        Self {
            expr: Arc::new(Expr::Scale(self.expr.clone(), c)),
            support: self.support,
            n_max: self.n_max,
            cn_bound: self.cn_bound * c.abs(),
        }
    }
}

/// The mollifier rescaled to `[a, b]` and divided by its `C^N` norm, `N = order`.
pub fn make_standard_bump(a: f64, b: f64, order: usize) -> BumpFunction {
    assert!(b > a, "support must be a nonempty interval");
    let s = 2.0 / (b - a);
    let raw = BumpFunction::new(Expr::Affine(Arc::new(Expr::Mollifier), s, -(a + b) / (b - a)), (a, b), order);
    let norm = raw.cn_norm_bound();
    raw.scaled(1.0 / norm)
}

fn unity_partition_expr() -> Expr {
    let step = Arc::new(Expr::Step(0.25));
    Expr::Sum(vec![
        Arc::new(Expr::Affine(step.clone(), 1.0, 0.5)),
        Arc::new(Expr::Scale(Arc::new(Expr::Affine(step, 1.0, -0.5)), -1.0)),
    ])
}

/// `phi(t) = Theta(t + 1/2) - Theta(t - 1/2)` with `Theta` rising on
/// `[-1/4, 1/4]`: supported in `[-3/4, 3/4]`, `phi(0) = 1`,
/// `sum_l phi(t + l) = 1`.
pub fn make_unity_partition(order: usize) -> BumpFunction {
    BumpFunction::new(unity_partition_expr(), (-0.75, 0.75), order)
}

/// `t^b phi(t)`.
pub fn make_phi_beta(phi: &BumpFunction, b: u32) -> BumpFunction {
    if b == 0 {
        return phi.clone();
    }
    BumpFunction::new(
        Expr::Product(Arc::new(Expr::Monomial(b)), phi.expr.clone()),
        phi.support,
        phi.n_max,
    )
}

/// `beta(t) = phi(log_2 t)`: supported in `[2^{-3/4}, 2^{3/4}] ⊂ [1/2, 2]`,
/// `sum_m beta(2^{-m} t) = 1` for `t > 0`.
pub fn make_lp_beta(order: usize) -> BumpFunction {
    BumpFunction::new(
        Expr::Log2(Arc::new(unity_partition_expr())),
        (2f64.powf(-0.75), 2f64.powf(0.75)),
        order,
    )
}

/// `psi(s) = s^alpha beta(s)` and `psi_0(t) = sum_{d in {1, 1/2}} d^alpha psi((1 - t) / d)`,
/// so that `(1 - t)^alpha = sum_{d = 2^k, k <= -2} d^alpha psi((1 - t) / d) + psi_0(t)`
/// on `[0, 1)`.
pub fn make_riesz_splitting(alpha: f64, order: usize) -> (BumpFunction, BumpFunction) {
    assert!(alpha >= 0.0, "alpha must be nonnegative");
    let beta = make_lp_beta(order);
    let psi_expr = Arc::new(Expr::Product(Arc::new(Expr::Power(alpha)), beta.expr.clone()));
    let psi = BumpFunction::new(Expr::Product(Arc::new(Expr::Power(alpha)), beta.expr.clone()), beta.support, order);
    let (lo, hi) = beta.support;
    let terms = [1.0, 0.5]
        .iter()
        .map(|&d: &f64| {
            Arc::new(Expr::Scale(
                Arc::new(Expr::Affine(psi_expr.clone(), -1.0 / d, 1.0 / d)),
                d.powf(alpha),
            ))
        })
        .collect();
    // (1 - t) / d in (lo, hi) for some d in {1, 1/2}
    let psi0 = BumpFunction::new(Expr::Sum(terms), (1.0 - hi, 1.0 - 0.5 * lo), order);
    (psi, psi0)
}

/// A bump named in a configuration file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum BumpPreset {
    /// [`make_standard_bump`] on `[lo, hi]`.
    Mollifier { lo: f64, hi: f64 },
    /// [`make_unity_partition`].
    StepDifference,
}

impl BumpPreset {
    pub fn build(&self, order: usize) -> BumpFunction {
        match *self {
            Self::Mollifier { lo, hi } => make_standard_bump(lo, hi, order),
            Self::StepDifference => make_unity_partition(order),
        }
    }
}

impl Default for BumpPreset {
    fn default() -> Self {
        Self::Mollifier { lo: -1.0, hi: 1.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fourth-order centred differences of the analytic derivatives.
    fn check_fd(f: &BumpFunction, x: f64, upto: usize) {
        let h = 2.5e-4;
        let d = f.derivatives(x, upto + 1);
        let at = |k: f64| f.derivatives(x + k * h, upto);
        let (m2, m1, p1, p2) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
        for j in 0..upto {
            let fd = (m2[j] - 8.0 * m1[j] + 8.0 * p1[j] - p2[j]) / (12.0 * h);
            let rel = (fd - d[j + 1]).abs() / d[j + 1].abs().max(1e-8);
            assert!(rel <= 1e-6, "j={j} x={x}: {fd} vs {}", d[j + 1]);
        }
    }

    #[test]
    fn standard_bump_shape() {
        let b = make_standard_bump(-1.0, 1.0, 8);
        assert!(b.value(0.0) > 0.0);
        assert_eq!(b.value(1.0), 0.0);
        assert_eq!(b.value(-1.0), 0.0);
        assert!(b.in_cn_class());
        assert!((b.cn_norm_bound() - 1.0).abs() < 1e-9);
        for j in 0..8 {
            assert!(b.derivative(0.9999, j).abs() < 1e-10);
        }
        check_fd(&b, 0.3, 6);
        let c = make_standard_bump(2.0, 5.0, 4);
        assert!(c.value(3.5) > 0.0 && c.value(1.9) == 0.0 && c.value(5.1) == 0.0);
    }

    #[test]
    fn unity_partition_telescopes() {
        let phi = make_unity_partition(8);
        assert!((phi.value(0.0) - 1.0).abs() < 1e-15);
        for i in 0..=1000 {
            let t = -1.0 + 2.0 * i as f64 / 1000.0;
            let s: f64 = (-3..=3).map(|l| phi.value(t + l as f64)).sum();
            assert!((s - 1.0).abs() <= 1e-10);
            assert!(phi.value(t) >= 0.0);
        }
        check_fd(&phi, 0.41, 6);
        check_fd(&phi, -0.6, 6);
    }

    #[test]
    fn lp_beta_partition() {
        let beta = make_lp_beta(8);
        let (a, b) = beta.support();
        assert!(a >= 0.5 && b <= 2.0);
        for i in 0..=600 {
            let t = 2f64.powf(-6.0 + 12.0 * i as f64 / 600.0);
            let s: f64 = (-8..=8).map(|m| beta.value(2f64.powi(-m) * t)).sum();
            assert!((s - 1.0).abs() <= 1e-10, "t={t}: {s}");
        }
        check_fd(&beta, 1.3, 6);
    }

    #[test]
    fn phi_beta_products() {
        let phi = make_unity_partition(8);
        let p1 = make_phi_beta(&phi, 1);
        assert_eq!(p1.value(0.0), 0.0);
        assert!((p1.value(0.5) - 0.5 * phi.value(0.5)).abs() < 1e-15);
        check_fd(&p1, 0.55, 6);
        assert!((make_phi_beta(&phi, 0).value(0.3) - phi.value(0.3)).abs() == 0.0);
    }

    #[test]
    fn splitting_supports() {
        let (psi, psi0) = make_riesz_splitting(1.5, 8);
        assert!(psi.support().0 >= 0.5 && psi.support().1 <= 2.0);
        assert!(psi0.support().0 >= -0.75 && psi0.support().1 <= 0.75);
        check_fd(&psi, 1.1, 6);
        check_fd(&psi0, 0.5, 6);
    }
}
