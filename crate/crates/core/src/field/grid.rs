use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A regular box grid over `C^n x R`.
///
/// Along each real coordinate of `z` the nodes are `-extent_z + i h_z` for
/// `i = 0..m_z` (so `0` is a node and differences of nodes are nodes of the
/// difference grid); the `t` axis is laid out the same way.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub extent_z: f64,
    pub extent_t: f64,
    pub m_z: usize,
    pub m_t: usize,
}

impl GridSpec {
    pub fn new(n: usize, extent_z: f64, extent_t: f64, m_z: usize, m_t: usize) -> Result<Self> {
        let spec = Self {
            n,
            extent_z,
            extent_t,
            m_z,
            m_t,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidGrid("n must be at least 1".into()));
        }
        for (name, m) in [("m_z", self.m_z), ("m_t", self.m_t)] {
            if m < 4 || m % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "{name} must be even and at least 4, got {m}"
                )));
            }
        }
        for (name, e) in [("extent_z", self.extent_z), ("extent_t", self.extent_t)] {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::InvalidGrid(format!("{name} must be positive, got {e}")));
            }
        }
        Ok(())
    }

    pub fn h_z(&self) -> f64 {
        2.0 * self.extent_z / self.m_z as f64
    }

    pub fn h_t(&self) -> f64 {
        2.0 * self.extent_t / self.m_t as f64
    }

    /// Number of real axes, `2n + 1`.
    pub fn dims(&self) -> usize {
        2 * self.n + 1
    }

    /// Number of nodes of the `z`-grid, `m_z^{2n}`.
    pub fn z_len(&self) -> usize {
        self.m_z.pow(2 * self.n as u32)
    }

    pub fn len(&self) -> usize {
        self.z_len() * self.m_t
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Area element of one `z` cell, `h_z^{2n}`.
    pub fn z_cell(&self) -> f64 {
        self.h_z().powi(2 * self.n as i32)
    }

    /// Haar (= Lebesgue) volume of one cell, `h_z^{2n} h_t`.
    pub fn cell_volume(&self) -> f64 {
        self.z_cell() * self.h_t()
    }

    pub fn box_volume(&self) -> f64 {
        (2.0 * self.extent_z).powi(2 * self.n as i32) * 2.0 * self.extent_t
    }

    pub fn z_coord(&self, i: usize) -> f64 {
        -self.extent_z + i as f64 * self.h_z()
    }

    pub fn t_coord(&self, i: usize) -> f64 {
        -self.extent_t + i as f64 * self.h_t()
    }

    /// Index of the node at coordinate 0 along a `z` axis.
    pub fn z_center(&self) -> usize {
        self.m_z / 2
    }

    pub fn axis_len(&self, axis: usize) -> usize {
        if axis == 2 * self.n {
            self.m_t
        } else {
            self.m_z
        }
    }

    pub fn axis_spacing(&self, axis: usize) -> f64 {
        if axis == 2 * self.n {
            self.h_t()
        } else {
            self.h_z()
        }
    }

    pub fn axis_coord(&self, axis: usize, i: usize) -> f64 {
        if axis == 2 * self.n {
            self.t_coord(i)
        } else {
            self.z_coord(i)
        }
    }

    /// Flat-index stride of an axis in the row-major layout
    /// `(Re z_1, Im z_1, ..., Re z_n, Im z_n, t)`.
    pub fn stride(&self, axis: usize) -> usize {
        let dims = self.dims();
        let mut s = 1;
        for a in (axis + 1)..dims {
            s *= self.axis_len(a);
        }
        s
    }

    /// Per-axis indices of a flat node index.
    pub fn multi_index(&self, mut idx: usize, out: &mut [usize]) {
        for axis in (0..self.dims()).rev() {
            let m = self.axis_len(axis);
            out[axis] = idx % m;
            idx /= m;
        }
    }

    /// Coordinates `[x_1, y_1, ..., x_n, y_n, t]` of a flat node index.
    pub fn node_coords(&self, idx: usize, out: &mut [f64]) {
        let mut rem = idx;
        for axis in (0..self.dims()).rev() {
            let m = self.axis_len(axis);
            out[axis] = self.axis_coord(axis, rem % m);
            rem /= m;
        }
    }

    /// Coordinates `[x_1, y_1, ..., x_n, y_n]` of a flat `z`-grid index.
    pub fn z_node_coords(&self, mut idx: usize, out: &mut [f64]) {
        for axis in (0..2 * self.n).rev() {
            out[axis] = self.z_coord(idx % self.m_z);
            idx /= self.m_z;
        }
    }

    /// Highest `t`-frequency the grid resolves, `pi / h_t`.
    pub fn t_nyquist(&self) -> f64 {
        std::f64::consts::PI / self.h_t()
    }

    /// Rough memory footprint in bytes of one complex field on this grid.
    pub fn field_bytes(&self) -> usize {
        self.len() * 16
    }

    pub(crate) fn same_as(&self, other: &Self) -> bool {
        self == other
    }
}
