use num_complex::Complex64;
use rayon::prelude::*;

use super::{p_lambda, SpectralGrid};
use crate::error::{Error, Result};
use crate::field::{GridSpec, SampledField};

/// `P_lambda f` at every node of a [`SpectralGrid`]. Any multiplier operator
/// `int m(lambda) P_lambda f dmu(lambda)` is then a weighted sum of the
/// cached fields.
#[derive(Debug, Clone)]
pub struct SpectralCache {
    grid: SpectralGrid,
    spec: GridSpec,
    fields: Vec<SampledField>,
}

impl SpectralCache {
    /// Bytes needed to cache `f` on `grid`.
    pub fn estimate_bytes(spec: &GridSpec, grid: &SpectralGrid) -> usize {
        spec.field_bytes().saturating_mul(grid.len())
    }

    pub fn build(f: &SampledField, grid: &SpectralGrid) -> Result<Self> {
        Self::build_capped(f, grid, usize::MAX)
    }

    /// As [`build`](Self::build), refusing grids whose cache would exceed `cap` bytes.
    pub fn build_capped(f: &SampledField, grid: &SpectralGrid, cap: usize) -> Result<Self> {
        let spec = *f.spec();
        if grid.n() != spec.n {
            return Err(Error::DimensionMismatch {
                expected: spec.n,
                found: grid.n(),
            });
        }
        let need = Self::estimate_bytes(&spec, grid);
        if need > cap {
            return Err(Error::Config(format!(
                "spectral cache needs {need} bytes ({} nodes of {} bytes), cap is {cap}",
                grid.len(),
                spec.field_bytes()
            )));
        }
        let fields = grid
            .nodes()
            .par_iter()
            .map(|&l| p_lambda(f, l, grid.k_max()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid: grid.clone(),
            spec,
            fields,
        })
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn fields(&self) -> &[SampledField] {
        &self.fields
    }

    /// `sum_j w_j P_{lambda_j} f`.
    pub fn combine(&self, weights: &[f64]) -> SampledField {
        assert_eq!(weights.len(), self.fields.len(), "one weight per cached node");
        let mut out = vec![Complex64::new(0.0, 0.0); self.spec.len()];
        for (w, field) in weights.iter().zip(&self.fields) {
            if *w == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(field.values()) {
                *o += v * w;
            }
        }
        SampledField::from_values(self.spec, out).expect("sizes agree")
    }

    /// `int m(lambda) P_lambda f dmu(lambda)` by product integration;
    /// `breaks` marks where `m` is not smooth.
    pub fn apply_multiplier(&self, m: impl Fn(f64) -> f64, breaks: &[f64]) -> SampledField {
        self.combine(&self.grid.product_weights(m, breaks))
    }

    /// `int P_lambda f dmu(lambda)` over the grid range.
    pub fn reconstruct(&self) -> SampledField {
        self.combine(self.grid.weights())
    }
}
