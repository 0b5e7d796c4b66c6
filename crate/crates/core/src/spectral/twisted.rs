//! `lambda`-twisted convolution on the `z`-grid.
//!
//! Every operation here reduces to
//! `out(z) = h^{2n} sum_w K(z - w) v(w) e^{(i/2) lambda Im(z . conj(w))}`
//! with `K` sampled on the difference grid (offsets `-(m-1)..=m-1` per axis),
//! so that `K` may be an analytic kernel rather than a boxed array.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{GridSpec, ZArray};
use crate::hgroup::symplectic;

#[derive(Debug, Clone)]
pub(crate) struct DiffKernel {
    n: usize,
    m: usize,
    h: f64,
    re: Vec<f64>,
    im: Option<Vec<f64>>,
}

impl DiffKernel {
    fn side(m: usize) -> usize {
        2 * m - 1
    }

    /// A real radial kernel `K(d) = g(|d|^2)`.
    pub(crate) fn radial(spec: &GridSpec, g: impl Fn(f64) -> f64) -> Self {
        let (n, m, h) = (spec.n, spec.m_z, spec.h_z());
        let side = Self::side(m);
        let len = side.pow(2 * n as u32);
        // Squared offsets along one axis, reused for every axis.
        let sq: Vec<f64> = (0..side)
            .map(|s| {
                let d = (s as f64 - (m - 1) as f64) * h;
                d * d
            })
            .collect();
        let re = (0..len)
            .map(|mut idx| {
                let mut r2 = 0.0;
                for _ in 0..2 * n {
                    r2 += sq[idx % side];
                    idx /= side;
                }
                g(r2)
            })
            .collect();
        Self { n, m, h, re, im: None }
    }

    /// `K(d) = u(d)`, zero where the offset leaves the box of `u`.
    pub(crate) fn from_zarray(u: &ZArray) -> Self {
        let spec = u.spec();
        let (n, m) = (spec.n, spec.m_z);
        let side = Self::side(m);
        let len = side.pow(2 * n as u32);
        let center = spec.z_center() as isize;
        let mut re = vec![0.0; len];
        let mut im = vec![0.0; len];
        let mut digits = vec![0usize; 2 * n];
        'outer: for idx in 0..len {
            let mut rem = idx;
            for ax in (0..2 * n).rev() {
                digits[ax] = rem % side;
                rem /= side;
            }
            let mut src = 0usize;
            for &d in &digits {
                let pos = d as isize - (m as isize - 1) + center;
                if pos < 0 || pos >= m as isize {
                    continue 'outer;
                }
                src = src * m + pos as usize;
            }
            let v = u.values()[src];
            re[idx] = v.re;
            im[idx] = v.im;
        }
        Self {
            n,
            m,
            h: spec.h_z(),
            re,
            im: Some(im),
        }
    }

    fn matches(&self, spec: &GridSpec) -> bool {
        self.n == spec.n && self.m == spec.m_z && self.h == spec.h_z()
    }
}

/// `(u *_lambda v)(z) = int u(z - w) v(w) e^{(i/2) lambda Im(z . conj(w))} dw`.
pub fn twisted_convolve(u: &ZArray, v: &ZArray, lambda: f64) -> Result<ZArray> {
    u.check_grid(v)?;
    apply_kernel(&DiffKernel::from_zarray(u), v, lambda)
}

pub(crate) fn apply_kernel(kernel: &DiffKernel, v: &ZArray, lambda: f64) -> Result<ZArray> {
    let spec = *v.spec();
    if !kernel.matches(&spec) {
        return Err(Error::GridMismatch);
    }
    let values = if spec.n == 1 {
        apply_plane(kernel, v.values(), &spec, lambda)
    } else {
        apply_generic(kernel, v.values(), &spec, lambda)
    };
    ZArray::from_values(spec, values)
}

/// Reference implementation: the plain double loop over nodes.
pub(crate) fn apply_generic(kernel: &DiffKernel, v: &[Complex64], spec: &GridSpec, lambda: f64) -> Vec<Complex64> {
    let (n, m) = (spec.n, spec.m_z);
    let side = DiffKernel::side(m);
    let dims = 2 * n;
    let len = spec.z_len();
    let mut coords = vec![0.0; len * dims];
    let mut index = vec![0usize; len * dims];
    for i in 0..len {
        spec.z_node_coords(i, &mut coords[i * dims..(i + 1) * dims]);
        let mut rem = i;
        for ax in (0..dims).rev() {
            index[i * dims + ax] = rem % m;
            rem /= m;
        }
    }
    let cell = spec.z_cell();
    (0..len)
        .into_par_iter()
        .map(|iz| {
            let zc = &coords[iz * dims..(iz + 1) * dims];
            let zi = &index[iz * dims..(iz + 1) * dims];
            let mut acc = Complex64::new(0.0, 0.0);
            for iw in 0..len {
                let wi = &index[iw * dims..(iw + 1) * dims];
                let mut k = 0usize;
                for ax in 0..dims {
                    k = k * side + (zi[ax] + m - 1 - wi[ax]);
                }
                let kv = Complex64::new(kernel.re[k], kernel.im.as_ref().map_or(0.0, |im| im[k]));
                let phase = 0.5 * lambda * symplectic(zc, &coords[iw * dims..(iw + 1) * dims]);
                acc += kv * v[iw] * Complex64::from_polar(1.0, phase);
            }
            acc * cell
        })
        .collect()
}

/// `n = 1` specialisation. With `z = x_i + i y_j` and `w = x_a + i y_b` the
/// twist factors as `e^{(i/2) lambda y_j x_a} e^{-(i/2) lambda x_i y_b}`, so
/// for fixed `(i, a)` the sum over `b` is a correlation of one kernel row with
/// a phased row of `v`, evaluated as contiguous dot products.
fn apply_plane(kernel: &DiffKernel, v: &[Complex64], spec: &GridSpec, lambda: f64) -> Vec<Complex64> {
    let m = spec.m_z;
    let side = DiffKernel::side(m);
    let coord: Vec<f64> = (0..m).map(|i| spec.z_coord(i)).collect();
    // twist[i * m + b] = e^{-(i/2) lambda c_i c_b}
    let mut tw_re = vec![0.0; m * m];
    let mut tw_im = vec![0.0; m * m];
    for i in 0..m {
        for b in 0..m {
            let (s, c) = (-0.5 * lambda * coord[i] * coord[b]).sin_cos();
            tw_re[i * m + b] = c;
            tw_im[i * m + b] = s;
        }
    }
    // Kernel rows reversed so the correlation index runs forward.
    let reverse = |src: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; src.len()];
        for row in 0..side {
            for s in 0..side {
                out[row * side + s] = src[row * side + side - 1 - s];
            }
        }
        out
    };
    let k_re = reverse(&kernel.re);
    let k_im = kernel.im.as_deref().map(reverse);
    let v_re: Vec<f64> = v.iter().map(|c| c.re).collect();
    let v_im: Vec<f64> = v.iter().map(|c| c.im).collect();
    let cell = spec.z_cell();

    let mut out = vec![Complex64::new(0.0, 0.0); m * m];
    out.par_chunks_mut(m).enumerate().for_each(|(i, row_out)| {
        let mut w_re = vec![0.0; m];
        let mut w_im = vec![0.0; m];
        let mut acc_re = vec![0.0; m];
        let mut acc_im = vec![0.0; m];
        let q_re = &tw_re[i * m..(i + 1) * m];
        let q_im = &tw_im[i * m..(i + 1) * m];
        for a in 0..m {
            let vr = &v_re[a * m..(a + 1) * m];
            let vi = &v_im[a * m..(a + 1) * m];
            let mut any = false;
            for b in 0..m {
                w_re[b] = vr[b] * q_re[b] - vi[b] * q_im[b];
                w_im[b] = vr[b] * q_im[b] + vi[b] * q_re[b];
                any |= w_re[b] != 0.0 || w_im[b] != 0.0;
            }
            if !any {
                continue;
            }
            let row = (i + m - 1 - a) * side;
            let kr = &k_re[row..row + side];
            let ki = k_im.as_ref().map(|k| &k[row..row + side]);
            for j in 0..m {
                let off = m - 1 - j;
                let (mut sr, mut si) = dot2(&kr[off..off + m], &w_re, &w_im);
                if let Some(ki) = ki {
                    let (tr, ti) = dot2(&ki[off..off + m], &w_re, &w_im);
                    sr -= ti;
                    si += tr;
                }
                // e^{(i/2) lambda y_j x_a} = conj(twist[j][a])
                let (pr, pi) = (tw_re[j * m + a], -tw_im[j * m + a]);
                acc_re[j] += pr * sr - pi * si;
                acc_im[j] += pr * si + pi * sr;
            }
        }
        for j in 0..m {
            row_out[j] = Complex64::new(acc_re[j], acc_im[j]) * cell;
        }
    });
    out
}

/// `(sum k * xr, sum k * xi)` with four independent lanes.
#[inline]
fn dot2(k: &[f64], xr: &[f64], xi: &[f64]) -> (f64, f64) {
    let len = k.len();
    let mut ar = [0.0f64; 4];
    let mut ai = [0.0f64; 4];
    let chunks = len / 4;
    for c in 0..chunks {
        let o = 4 * c;
        for l in 0..4 {
            ar[l] += k[o + l] * xr[o + l];
            ai[l] += k[o + l] * xi[o + l];
        }
    }
    let mut tr = (ar[0] + ar[1]) + (ar[2] + ar[3]);
    let mut ti = (ai[0] + ai[1]) + (ai[2] + ai[3]);
    for o in 4 * chunks..len {
        tr += k[o] * xr[o];
        ti += k[o] * xi[o];
    }
    (tr, ti)
}
