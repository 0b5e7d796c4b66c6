//! Complex fields sampled on a box in `C^n x R`, with Haar quadrature,
//! Lebesgue norms, the partial Fourier transform in `t`, finite-difference
//! left-invariant vector fields and dilation resampling.

mod grid;
mod io;

pub use grid::GridSpec;
pub use io::{read_field, write_field};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{pairwise_sum_by, pairwise_sum_complex};

#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    spec: GridSpec,
    values: Vec<Complex64>,
}

/// A complex array on the `z`-grid of a [`GridSpec`] (one value per `z` node).
#[derive(Debug, Clone, PartialEq)]
pub struct ZArray {
    spec: GridSpec,
    values: Vec<Complex64>,
}

/// Which left-invariant vector field to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorField {
    /// `X_j = d/dx_j + (y_j / 2) d/dt`
    X,
    /// `Y_j = d/dy_j - (x_j / 2) d/dt`
    Y,
}

impl SampledField {
    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); spec.len()],
            spec,
        }
    }

    pub fn from_values(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                spec.len(),
                values.len()
            )));
        }
        Ok(Self { spec, values })
    }

    /// Samples `f` at every node; `f` receives `[x_1, y_1, ..., x_n, y_n, t]`.
    pub fn from_fn(spec: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let mut coords = vec![0.0; spec.dims()];
        let values = (0..spec.len())
            .map(|i| {
                spec.node_coords(i, &mut coords);
                f(&coords)
            })
            .collect();
        Self { spec, values }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub(crate) fn check_grid(&self, other: &Self) -> Result<()> {
        if !self.spec.same_as(&other.spec) {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            spec: self.spec,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.check_grid(other)?;
        Ok(Self {
            spec: self.spec,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        Ok(Self {
            spec: self.spec,
            values: self.values.iter().zip(&other.values).map(|(x, y)| x * y).collect(),
        })
    }

    pub fn abs(&self) -> Self {
        Self {
            spec: self.spec,
            values: self.values.iter().map(|v| Complex64::new(v.norm(), 0.0)).collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Haar integral `sum_nodes f(node) * cell volume`.
    pub fn integrate(&self) -> Complex64 {
        pairwise_sum_complex(&self.values) * self.spec.cell_volume()
    }

    /// `||f||_p` on the grid; `p = f64::INFINITY` gives the max modulus.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            return Ok(self.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        let s = if p == 2.0 {
            pairwise_sum_by(self.values.len(), &|i| self.values[i].norm_sqr())
        } else {
            pairwise_sum_by(self.values.len(), &|i| self.values[i].norm().powf(p))
        };
        Ok((s * self.spec.cell_volume()).powf(1.0 / p))
    }

    /// `||f||_p` restricted to nodes selected by `mask`.
    pub fn lp_norm_masked(&self, p: f64, mask: &[bool]) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            return Ok(self
                .values
                .iter()
                .zip(mask)
                .filter(|(_, &m)| m)
                .map(|(v, _)| v.norm())
                .fold(0.0, f64::max));
        }
        let s = pairwise_sum_by(self.values.len(), &|i| {
            if mask[i] {
                self.values[i].norm().powf(p)
            } else {
                0.0
            }
        });
        Ok((s * self.spec.cell_volume()).powf(1.0 / p))
    }

    /// `<f, g> = integral f conj(g)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_grid(other)?;
        let prods: Vec<Complex64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .collect();
        Ok(pairwise_sum_complex(&prods) * self.spec.cell_volume())
    }

    /// Trapezoidal `f^lambda(z) = integral e^{i lambda t} f(z, t) dt` at every `z` node.
    pub fn partial_fourier_t(&self, lambda: f64) -> ZArray {
        let spec = self.spec;
        let m_t = spec.m_t;
        let ht = spec.h_t();
        let phase: Vec<Complex64> = (0..m_t)
            .map(|i| Complex64::from_polar(ht, lambda * spec.t_coord(i)))
            .collect();
        let values = self
            .values
            .chunks_exact(m_t)
            .map(|row| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (v, p) in row.iter().zip(&phase) {
                    acc += v * p;
                }
                acc
            })
            .collect();
        ZArray { spec, values }
    }

    /// Second-order finite-difference derivative along `axis`, one-sided at
    /// the two boundary nodes.
    pub fn partial(&self, axis: usize) -> Self {
        let spec = self.spec;
        let m = spec.axis_len(axis);
        let h = spec.axis_spacing(axis);
        let stride = spec.stride(axis);
        let mut out = vec![Complex64::new(0.0, 0.0); self.values.len()];
        let inv2h = 1.0 / (2.0 * h);
        let block = stride * m;
        for base in (0..self.values.len()).step_by(block) {
            for off in 0..stride {
                let at = |i: usize| self.values[base + off + i * stride];
                for i in 0..m {
                    let d = if i == 0 {
                        -3.0 * at(0) + 4.0 * at(1) - at(2)
                    } else if i == m - 1 {
                        3.0 * at(m - 1) - 4.0 * at(m - 2) + at(m - 3)
                    } else {
                        at(i + 1) - at(i - 1)
                    };
                    out[base + off + i * stride] = d * inv2h;
                }
            }
        }
        Self { spec, values: out }
    }

    /// Applies `X_j` or `Y_j` (`j` is 1-based) by finite differences.
    pub fn apply_vector_field(&self, which: VectorField, j: usize) -> Result<Self> {
        let n = self.spec.n;
        if j == 0 || j > n {
            return Err(Error::InvalidParameter(format!("vector field index {j} not in 1..={n}")));
        }
        let (ax_x, ax_y) = (2 * (j - 1), 2 * (j - 1) + 1);
        let dt = self.partial(2 * n);
        let (d_own, coeff_axis, sign) = match which {
            VectorField::X => (self.partial(ax_x), ax_y, 0.5),
            VectorField::Y => (self.partial(ax_y), ax_x, -0.5),
        };
        let spec = self.spec;
        let mut coords = vec![0.0; spec.dims()];
        let values = (0..spec.len())
            .map(|i| {
                spec.node_coords(i, &mut coords);
                d_own.values[i] + sign * coords[coeff_axis] * dt.values[i]
            })
            .collect();
        Ok(Self { spec, values })
    }

    /// Sublaplacian `L = -sum_j (X_j^2 + Y_j^2)`, each square applied as a
    /// composition of the finite-difference vector fields.
    pub fn apply_sublaplacian(&self) -> Self {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.values.len()];
        for j in 1..=self.spec.n {
            for which in [VectorField::X, VectorField::Y] {
                let once = self.apply_vector_field(which, j).expect("valid index");
                let twice = once.apply_vector_field(which, j).expect("valid index");
                for (a, v) in acc.iter_mut().zip(&twice.values) {
                    *a -= v;
                }
            }
        }
        Self {
            spec: self.spec,
            values: acc,
        }
    }

    /// Resamples `x -> f(delta_s x)` by multilinear interpolation; nodes whose
    /// image leaves the sampled box read 0.
    pub fn dilate_field(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::NonPositiveScale(s));
        }
        let spec = self.spec;
        let mut coords = vec![0.0; spec.dims()];
        let values = (0..spec.len())
            .map(|i| {
                spec.node_coords(i, &mut coords);
                crate::hgroup::dilate_in_place(&mut coords, s);
                self.interpolate(&coords)
            })
            .collect();
        Ok(Self { spec, values })
    }

    /// Multilinear interpolation at an arbitrary point; 0 outside the box.
    pub fn interpolate(&self, point: &[f64]) -> Complex64 {
        let spec = &self.spec;
        let dims = spec.dims();
        let mut base = 0usize;
        let mut fracs = [0.0f64; 16];
        let mut strides = [0usize; 16];
        for axis in 0..dims {
            let m = spec.axis_len(axis);
            let h = spec.axis_spacing(axis);
            let lo = spec.axis_coord(axis, 0);
            let pos = (point[axis] - lo) / h;
            if !(pos >= 0.0) || pos > (m - 1) as f64 {
                return Complex64::new(0.0, 0.0);
            }
            let i0 = (pos.floor() as usize).min(m - 2);
            fracs[axis] = pos - i0 as f64;
            strides[axis] = spec.stride(axis);
            base += i0 * strides[axis];
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << dims) {
            let mut w = 1.0;
            let mut idx = base;
            for axis in 0..dims {
                if corner >> axis & 1 == 1 {
                    w *= fracs[axis];
                    idx += strides[axis];
                } else {
                    w *= 1.0 - fracs[axis];
                }
            }
            if w != 0.0 {
                acc += self.values[idx] * w;
            }
        }
        acc
    }

    /// Mask of nodes inside the sub-box `|z coords| <= fz * extent_z`,
    /// `|t| <= ft * extent_t`.
    pub fn interior_mask(spec: &GridSpec, fz: f64, ft: f64) -> Vec<bool> {
        let mut coords = vec![0.0; spec.dims()];
        let last = spec.dims() - 1;
        (0..spec.len())
            .map(|i| {
                spec.node_coords(i, &mut coords);
                coords[..last].iter().all(|c| c.abs() <= fz * spec.extent_z + 1e-12)
                    && coords[last].abs() <= ft * spec.extent_t + 1e-12
            })
            .collect()
    }
}

impl ZArray {
    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); spec.z_len()],
            spec,
        }
    }

    pub fn from_values(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.z_len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} z values, got {}",
                spec.z_len(),
                values.len()
            )));
        }
        Ok(Self { spec, values })
    }

    /// Samples `f` on the `z`-grid; `f` receives `[x_1, y_1, ..., x_n, y_n]`.
    pub fn from_fn(spec: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let mut coords = vec![0.0; 2 * spec.n];
        let values = (0..spec.z_len())
            .map(|i| {
                spec.z_node_coords(i, &mut coords);
                f(&coords)
            })
            .collect();
        Self { spec, values }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub(crate) fn check_grid(&self, other: &Self) -> Result<()> {
        if self.spec.n != other.spec.n
            || self.spec.m_z != other.spec.m_z
            || self.spec.extent_z != other.spec.extent_z
        {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `integral |u|^2 dz` on the `z`-grid.
    pub fn norm_sqr(&self) -> f64 {
        pairwise_sum_by(self.values.len(), &|i| self.values[i].norm_sqr()) * self.spec.z_cell()
    }

    /// `integral u conj(v) dz`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_grid(other)?;
        let prods: Vec<Complex64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .collect();
        Ok(pairwise_sum_complex(&prods) * self.spec.z_cell())
    }

    /// The field `(z, t) -> e^{-i mu t} u(z)`.
    pub fn modulate_in_t(&self, mu: f64) -> SampledField {
        let spec = self.spec;
        let phase: Vec<Complex64> = (0..spec.m_t)
            .map(|i| Complex64::from_polar(1.0, -mu * spec.t_coord(i)))
            .collect();
        let mut values = Vec::with_capacity(spec.len());
        for u in &self.values {
            values.extend(phase.iter().map(|p| u * p));
        }
        SampledField { spec, values }
    }
}
