//! Points of the Heisenberg group `H^n = C^n x R` and its homogeneous structure.
//!
//! A point is stored as a flat array `[x_1, y_1, ..., x_n, y_n, t]` with
//! `z_j = x_j + i y_j`, so bulk loops over grids can work on plain reals.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dimension bookkeeping for `H^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomogeneousStructure {
    n: usize,
}

impl HomogeneousStructure {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Homogeneous dimension `Q = 2n + 2`.
    pub fn q(&self) -> usize {
        2 * self.n + 2
    }

    /// Topological dimension `D = 2n + 1`.
    pub fn d(&self) -> usize {
        2 * self.n + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint {
    coords: Vec<f64>,
}

impl GroupPoint {
    pub fn identity(n: usize) -> Self {
        Self {
            coords: vec![0.0; 2 * n + 1],
        }
    }

    /// Builds a point from its flat coordinates `[x_1, y_1, ..., x_n, y_n, t]`.
    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 3 || coords.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "a point of H^n needs 2n+1 >= 3 coordinates, got {}",
                coords.len()
            )));
        }
        Ok(Self { coords })
    }

    pub fn new(z: &[Complex64], t: f64) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let mut coords = Vec::with_capacity(2 * z.len() + 1);
        for zj in z {
            coords.push(zj.re);
            coords.push(zj.im);
        }
        coords.push(t);
        Ok(Self { coords })
    }

    pub fn n(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn z(&self, j: usize) -> Complex64 {
        Complex64::new(self.coords[2 * j], self.coords[2 * j + 1])
    }

    pub fn t(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    /// `|z|^2 = sum_j |z_j|^2`.
    pub fn z_norm_sqr(&self) -> f64 {
        z_norm_sqr(&self.coords)
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.coords.len() != other.coords.len() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    /// Group law `(z, t)(w, s) = (z + w, t + s + Im(z . conj(w)) / 2)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let mut coords = vec![0.0; self.coords.len()];
        mul_into(&self.coords, &other.coords, &mut coords);
        Ok(Self { coords })
    }

    pub fn inv(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Non-isotropic dilation `delta_r(z, t) = (r z, r^2 t)`.
    pub fn dilate(&self, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::NonPositiveScale(r));
        }
        let mut coords = self.coords.clone();
        dilate_in_place(&mut coords, r);
        Ok(Self { coords })
    }

    /// Homogeneous norm `(|z|^4 / 16 + t^2)^(1/4)`.
    pub fn norm(&self) -> f64 {
        homogeneous_norm(&self.coords)
    }

    /// Left-invariant distance `d(x, y) = |x^{-1} y|`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.inv().mul(other)?.norm())
    }

    /// Membership in the open ball `B(self, r)`.
    pub fn ball_contains(&self, r: f64, y: &Self) -> Result<bool> {
        Ok(self.distance(y)? < r)
    }
}

/// `Im(z . conj(w))` on flat coordinate slices (the trailing `t` is ignored).
pub(crate) fn symplectic(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() / 2;
    let mut acc = 0.0;
    for j in 0..n {
        // Im((x + iy)(u - iv)) = y u - x v
        acc += a[2 * j + 1] * b[2 * j] - a[2 * j] * b[2 * j + 1];
    }
    acc
}

pub(crate) fn mul_into(a: &[f64], b: &[f64], out: &mut [f64]) {
    let last = a.len() - 1;
    for i in 0..last {
        out[i] = a[i] + b[i];
    }
    out[last] = a[last] + b[last] + 0.5 * symplectic(a, b);
}

pub(crate) fn dilate_in_place(coords: &mut [f64], r: f64) {
    let last = coords.len() - 1;
    for c in &mut coords[..last] {
        *c *= r;
    }
    coords[last] *= r * r;
}

pub(crate) fn z_norm_sqr(coords: &[f64]) -> f64 {
    coords[..coords.len() - 1].iter().map(|c| c * c).sum()
}

pub(crate) fn homogeneous_norm(coords: &[f64]) -> f64 {
    let z2 = z_norm_sqr(coords);
    let t = coords[coords.len() - 1];
    (z2 * z2 / 16.0 + t * t).sqrt().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_neutral() {
        let x = GroupPoint::new(&[c(1.5, -2.0), c(0.25, 3.0)], 0.7).unwrap();
        let e = GroupPoint::identity(2);
        assert_eq!(x.mul(&e).unwrap(), x);
        assert_eq!(e.mul(&x).unwrap(), x);
    }

    #[test]
    fn group_law_by_hand() {
        let x = GroupPoint::new(&[c(1.0, 0.0)], 0.0).unwrap();
        let y = GroupPoint::new(&[c(0.0, 1.0)], 0.0).unwrap();
        let p = x.mul(&y).unwrap();
        assert_eq!(p.z(0), c(1.0, 1.0));
        assert_eq!(p.t(), -0.5);
    }

    #[test]
    fn inverse() {
        let x = GroupPoint::new(&[c(1.0, 1.0)], 3.0).unwrap();
        let xi = x.inv();
        assert_eq!(xi.z(0), c(-1.0, -1.0));
        assert_eq!(xi.t(), -3.0);
        assert_eq!(x.mul(&xi).unwrap(), GroupPoint::identity(1));
        assert_eq!(GroupPoint::identity(1).inv(), GroupPoint::identity(1));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let x = GroupPoint::identity(1);
        let y = GroupPoint::identity(2);
        assert!(matches!(
            x.mul(&y),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn dilation() {
        let x = GroupPoint::new(&[c(1.0, 0.0)], 1.0).unwrap();
        let d = x.dilate(2.0).unwrap();
        assert_eq!(d.z(0), c(2.0, 0.0));
        assert_eq!(d.t(), 4.0);
        assert_eq!(x.dilate(1.0).unwrap(), x);
        assert!(x.dilate(0.0).is_err());
        assert!(x.dilate(-1.0).is_err());
    }

    #[test]
    fn norm_values() {
        let x = GroupPoint::new(&[c(0.0, 0.0)], -9.0).unwrap();
        assert!((x.norm() - 3.0).abs() < 1e-15);
        let y = GroupPoint::new(&[c(2.0, 0.0)], 0.0).unwrap();
        assert_eq!(y.norm(), 1.0);
    }

    #[test]
    fn homogeneous_structure() {
        let h = HomogeneousStructure::new(3).unwrap();
        assert_eq!(h.q(), 8);
        assert_eq!(h.d(), 7);
        assert_eq!(h.q(), h.d() + 1);
        assert!(HomogeneousStructure::new(0).is_err());
    }

    #[test]
    fn balls() {
        let x = GroupPoint::new(&[c(1.0, 0.0)], 0.0).unwrap();
        let y = GroupPoint::new(&[c(1.0, 0.0)], 0.25).unwrap();
        assert!(x.ball_contains(0.6, &y).unwrap());
        assert!(!x.ball_contains(0.5, &y).unwrap());
    }
}
