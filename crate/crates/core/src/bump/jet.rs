//! Truncated Taylor series `f(x0 + h) = sum_j c_j h^j`, `j <= order`.

#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<f64>);

impl Jet {
    pub fn zero(order: usize) -> Self {
        Self(vec![0.0; order + 1])
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.0[0] = c;
        j
    }

    /// The jet of the identity map at `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if order > 0 {
            j.0[1] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// Derivatives `f^{(j)}(x0) = j! c_j`.
    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.0
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j > 0 {
                    fact *= j as f64;
                }
                c * fact
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len();
        let mut out = vec![0.0; n];
        for (k, o) in out.iter_mut().enumerate() {
            for i in 0..=k {
                *o += self.0[i] * other.0[k - i];
            }
        }
        Self(out)
    }

    pub fn recip(&self) -> Self {
        let a = &self.0;
        let mut b = vec![0.0; a.len()];
        b[0] = 1.0 / a[0];
        for k in 1..a.len() {
            let s: f64 = (1..=k).map(|i| a[i] * b[k - i]).sum();
            b[k] = -s / a[0];
        }
        Self(b)
    }

    pub fn exp(&self) -> Self {
        let a = &self.0;
        let mut e = vec![0.0; a.len()];
        e[0] = a[0].exp();
        for k in 1..a.len() {
            let s: f64 = (1..=k).map(|i| i as f64 * a[i] * e[k - i]).sum();
            e[k] = s / k as f64;
        }
        Self(e)
    }

    pub fn ln(&self) -> Self {
        let a = &self.0;
        let mut l = vec![0.0; a.len()];
        l[0] = a[0].ln();
        for k in 1..a.len() {
            let s: f64 = (1..k).map(|i| i as f64 * l[i] * a[k - i]).sum();
            l[k] = (a[k] - s / k as f64) / a[0];
        }
        Self(l)
    }

    /// Jet of `x -> self(a x + b)` at the point whose image is this jet's base.
    pub fn affine_pullback(&self, a: f64) -> Self {
        let mut p = 1.0;
        Self(
            self.0
                .iter()
                .map(|c| {
                    let v = c * p;
                    p *= a;
                    v
                })
                .collect(),
        )
    }

    /// `self(inner(x))`, where `self` is the jet of the outer function at
    /// `inner.value()`.
    pub fn compose(&self, inner: &Self) -> Self {
        let order = inner.order();
        let mut delta = inner.clone();
        delta.0[0] = 0.0;
        // Horner: c_0 + d (c_1 + d (c_2 + ...))
        let mut acc = Self::constant(self.0[order], order);
        for j in (0..order).rev() {
            acc = acc.mul(&delta);
            acc.0[0] += self.0[j];
        }
        acc
    }
}
