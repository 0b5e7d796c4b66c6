use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Nodes of the sub-rule used when integrating a multiplier against the
/// interpolation basis of one panel.
const SUB_ORDER: usize = 24;
const SUB_PIECES: usize = 3;

fn sub_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(SUB_ORDER))
}

/// Parameters of a [`SpectralGrid`], as they appear in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    pub k_max: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub panels: usize,
    pub order: usize,
}

impl SpectralParams {
    pub fn build(&self, n: usize) -> Result<SpectralGrid> {
        SpectralGrid::composite(n, self.k_max, self.lambda_min, self.lambda_max, self.panels, self.order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Panel {
    start: usize,
    lo: f64,
    hi: f64,
}

/// Laguerre truncation plus Gauss-Legendre nodes in `lambda > 0` whose
/// weights carry the Plancherel density `(2 pi)^{-n-1} lambda^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    n: usize,
    k_max: usize,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: Vec<Panel>,
    /// Reference nodes on `[-1, 1]` and their barycentric weights.
    ref_nodes: Vec<f64>,
    bary: Vec<f64>,
}

/// `(2 pi)^{-n-1} |lambda|^n`.
pub fn plancherel_density(n: usize, lambda: f64) -> f64 {
    (2.0 * PI).powi(-(n as i32) - 1) * lambda.abs().powi(n as i32)
}

impl SpectralGrid {
    /// A single Gauss-Legendre panel with `count` nodes on `[lo, hi]`.
    pub fn gauss_legendre(n: usize, k_max: usize, lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::composite(n, k_max, lo, hi, 1, count)
    }

    /// `panels` equal Gauss-Legendre panels of `order` nodes on `[lo, hi]`.
    pub fn composite(n: usize, k_max: usize, lo: f64, hi: f64, panels: usize, order: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda range [{lo}, {hi}] must satisfy 0 < lo < hi")));
        }
        if panels == 0 || order == 0 {
            return Err(Error::InvalidParameter("need at least one panel and one node".into()));
        }
        let (x, w) = gauss_legendre(order);
        let width = (hi - lo) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        let mut pans = Vec::with_capacity(panels);
        for p in 0..panels {
            let a = lo + p as f64 * width;
            let b = if p + 1 == panels { hi } else { a + width };
            pans.push(Panel {
                start: nodes.len(),
                lo: a,
                hi: b,
            });
            let half = 0.5 * (b - a);
            for (xi, wi) in x.iter().zip(&w) {
                let l = a + half * (xi + 1.0);
                nodes.push(l);
                weights.push(half * wi * plancherel_density(n, l));
            }
        }
        let bary = (0..order)
            .map(|j| {
                let mut p = 1.0;
                for i in 0..order {
                    if i != j {
                        p *= x[j] - x[i];
                    }
                }
                1.0 / p
            })
            .collect();
        Ok(Self {
            n,
            k_max,
            order,
            nodes,
            weights,
            panels: pans,
            ref_nodes: x,
            bary,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn with_k_max(&self, k_max: usize) -> Self {
        Self { k_max, ..self.clone() }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lambda_min(&self) -> f64 {
        self.panels[0].lo
    }

    pub fn lambda_max(&self) -> f64 {
        self.panels[self.panels.len() - 1].hi
    }

    /// Nodal weights `w_j m(lambda_j)`.
    pub fn nodal_weights(&self, m: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().zip(&self.weights).map(|(&l, &w)| w * m(l)).collect()
    }

    /// Product-integration weights
    /// `W_j = (2 pi)^{-n-1} int m(lambda) l_j(lambda) lambda^n dlambda`, where
    /// `l_j` is the Lagrange basis of the panel holding node `j`. `breaks`
    /// lists points where `m` is not smooth (support edges, kinks); the
    /// integral is split there, so narrow or one-sided multipliers are
    /// integrated accurately even when they fall between nodes.
    pub fn product_weights(&self, m: impl Fn(f64) -> f64, breaks: &[f64]) -> Vec<f64> {
        self.product_weights_within(m, (f64::NEG_INFINITY, f64::INFINITY), breaks)
    }

    /// As [`product_weights`](Self::product_weights) for an `m` known to
    /// vanish outside `support`; panels outside it are skipped.
    pub fn product_weights_within(&self, m: impl Fn(f64) -> f64, support: (f64, f64), breaks: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.nodes.len()];
        let sub = sub_rule();
        let mut basis = vec![0.0; self.order];
        for panel in &self.panels {
            if panel.hi <= support.0 || panel.lo >= support.1 {
                continue;
            }
            let mut cuts = vec![panel.lo, panel.hi];
            cuts.extend(breaks.iter().copied().filter(|&b| b > panel.lo && b < panel.hi));
            cuts.sort_by(f64::total_cmp);
            let half = 0.5 * (panel.hi - panel.lo);
            let mid = 0.5 * (panel.hi + panel.lo);
            for pair in cuts.windows(2) {
                let step = (pair[1] - pair[0]) / SUB_PIECES as f64;
                for piece in 0..SUB_PIECES {
                    let a = pair[0] + piece as f64 * step;
                    let h = 0.5 * step;
                    for (xs, ws) in sub.0.iter().zip(&sub.1) {
                        let l = a + h * (xs + 1.0);
                        let mv = m(l);
                        if mv == 0.0 {
                            continue;
                        }
                        let f = h * ws * mv * plancherel_density(self.n, l);
                        self.barycentric((l - mid) / half, &mut basis);
                        for (o, b) in out[panel.start..panel.start + self.order].iter_mut().zip(&basis) {
                            *o += f * b;
                        }
                    }
                }
            }
        }
        out
    }

    fn barycentric(&self, x: f64, out: &mut [f64]) {
        let nodes = &self.ref_nodes;
        if let Some(j) = nodes.iter().position(|&xj| xj == x) {
            out.iter_mut().for_each(|o| *o = 0.0);
            out[j] = 1.0;
            return;
        }
        let mut denom = 0.0;
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.bary[j] / (x - nodes[j]);
            denom += *o;
        }
        for o in out.iter_mut() {
            *o /= denom;
        }
    }
}
