use num_complex::Complex64;

use hriesz::bump::{make_riesz_splitting, make_standard_bump};
use hriesz::experiments::TestField;
use hriesz::field::{GridSpec, SampledField};
use hriesz::hgroup::GroupPoint;
use hriesz::riesz::{
    bilinear_localized, bilinear_localized_dr, bilinear_riesz, general_multiplier, linear_riesz, maximal_over,
    multiplier_kernel, KernelQuadrature, Localized,
};
use hriesz::spectral::{SpectralCache, SpectralGrid};

fn spec() -> GridSpec {
    GridSpec::new(1, 5.0, 5.0, 16, 16).unwrap()
}

fn grid() -> SpectralGrid {
    SpectralGrid::composite(1, 16, 0.05, 8.0, 4, 6).unwrap()
}

fn cache_of(field: TestField) -> (SampledField, SpectralCache) {
    let f = field.sample(spec());
    let c = SpectralCache::build(&f, &grid()).unwrap();
    (f, c)
}

fn norm(f: &SampledField) -> f64 {
    f.lp_norm(2.0).unwrap()
}

fn dist(a: &SampledField, b: &SampledField) -> f64 {
    norm(&a.sub(b).unwrap())
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[test]
fn bilinear_means_are_bilinear_and_symmetric() {
    let (f1, c1) = cache_of(TestField::Gaussian);
    let (f2, c2) = cache_of(TestField::Hermite);
    let (_, g) = cache_of(TestField::Anisotropic { a: 0.8, b: 1.2 });
    let k = Complex64::new(-0.7, 0.0);
    let combo = f1.combine(one(), &f2, k).unwrap();
    let cc = SpectralCache::build(&combo, &grid()).unwrap();
    let (alpha, r) = (2.0, 0.1);
    let lhs = bilinear_riesz(&cc, &g, alpha, r).unwrap();
    let rhs = bilinear_riesz(&c1, &g, alpha, r)
        .unwrap()
        .combine(one(), &bilinear_riesz(&c2, &g, alpha, r).unwrap(), k)
        .unwrap();
    assert!(dist(&lhs, &rhs) < 1e-12 * norm(&lhs));

    let swapped = bilinear_riesz(&g, &c1, alpha, r).unwrap();
    assert!(dist(&swapped, &bilinear_riesz(&c1, &g, alpha, r).unwrap()) < 1e-12 * norm(&swapped));
}

#[test]
fn large_scales_annihilate() {
    let (_, c) = cache_of(TestField::Gaussian);
    // r (lambda_1 + lambda_2) >= 2 r lambda_min >= 1 on every node
    let r = 1.0 / (2.0 * grid().lambda_min());
    let s = bilinear_riesz(&c, &c, 1.5, r).unwrap();
    assert_eq!(norm(&s), 0.0);
    assert_eq!(norm(&maximal_over(&c, &c, 1.5, &[r, 2.0 * r]).unwrap()), 0.0);
}

#[test]
fn maximal_function_dominates_and_grows_with_the_scale_set() {
    let (_, f) = cache_of(TestField::Gaussian);
    let (_, g) = cache_of(TestField::Modulated { lambda0: 1.0 });
    let alpha = 3.5;
    let coarse = [0.02, 0.08, 0.32];
    let fine = [0.02, 0.04, 0.08, 0.16, 0.32];
    let m_coarse = maximal_over(&f, &g, alpha, &coarse).unwrap();
    let m_fine = maximal_over(&f, &g, alpha, &fine).unwrap();
    for r in fine {
        let s = bilinear_riesz(&f, &g, alpha, r).unwrap();
        for (m, v) in m_fine.values().iter().zip(s.values()) {
            assert!(m.re >= v.norm() - 1e-15);
        }
    }
    for (a, b) in m_fine.values().iter().zip(m_coarse.values()) {
        assert!(a.re >= b.re);
    }
    // pointwise triangle inequality for the maximal operator in f
    let (_, h) = cache_of(TestField::Hermite);
    let sum_field = TestField::Gaussian
        .sample(spec())
        .combine(one(), &TestField::Hermite.sample(spec()), one())
        .unwrap();
    let fh = SpectralCache::build(&sum_field, &grid()).unwrap();
    let m_sum = maximal_over(&fh, &g, alpha, &fine).unwrap();
    let m_h = maximal_over(&h, &g, alpha, &fine).unwrap();
    for ((s, a), b) in m_sum.values().iter().zip(m_fine.values()).zip(m_h.values()) {
        assert!(s.re <= a.re + b.re + 1e-14);
    }
}

#[test]
fn dyadic_pieces_reassemble_the_mean() {
    let (_, f) = cache_of(TestField::Gaussian);
    let (_, g) = cache_of(TestField::Hermite);
    let (alpha, r) = (2.0, 0.05);
    let (psi, psi0) = make_riesz_splitting(alpha, 8);
    let mut sum = bilinear_localized(&f, &g, Localized::Low { psi0: &psi0 }, r).unwrap();
    for k in 2..=16 {
        let delta = 2f64.powi(-k);
        let piece = bilinear_localized(&f, &g, Localized::Band { psi: &psi, delta }, r).unwrap();
        sum = sum.combine(one(), &piece, Complex64::new(delta.powf(alpha), 0.0)).unwrap();
    }
    let direct = bilinear_riesz(&f, &g, alpha, r).unwrap();
    assert!(dist(&sum, &direct) < 1e-3 * norm(&direct), "{:e}", dist(&sum, &direct) / norm(&direct));
}

#[test]
fn low_piece_vanishes_past_its_support() {
    let (_, f) = cache_of(TestField::Gaussian);
    let (_, psi0) = make_riesz_splitting(2.0, 8);
    // psi_0(r s) = 0 once r * 2 lambda_min is past the right end of its support
    let r = psi0.support().1 / (2.0 * grid().lambda_min());
    let s = bilinear_localized(&f, &f, Localized::Low { psi0: &psi0 }, r).unwrap();
    assert_eq!(norm(&s), 0.0);
}

#[test]
fn scale_derivative_matches_differences() {
    let (_, f) = cache_of(TestField::Gaussian);
    let (_, g) = cache_of(TestField::Shifted { z0: [0.2, -0.1], t0: 0.3 });
    let (psi, _) = make_riesz_splitting(2.0, 8);
    let (delta, k, r) = (0.25, -3, 1.2);
    let c = 2f64.powi(k);
    let at = |r: f64| bilinear_localized(&f, &g, Localized::Band { psi: &psi, delta }, c * r).unwrap();
    let d = bilinear_localized_dr(&f, &g, &psi, delta, k, r).unwrap();
    let h = 1e-4;
    let fd = at(r + h).combine(one(), &at(r - h), -one()).unwrap().scale(Complex64::new(0.5 / h, 0.0));
    assert!(dist(&fd, &d) < 1e-3 * norm(&d));

    // |S(r_2) - S(r_1)| <= int |dS/dr| dr, with the integral by the midpoint rule
    let (r1, r2, steps) = (1.0, 1.5, 200);
    let mut bound = vec![0.0f64; spec().len()];
    let dr = (r2 - r1) / steps as f64;
    for i in 0..steps {
        let d = bilinear_localized_dr(&f, &g, &psi, delta, k, r1 + (i as f64 + 0.5) * dr).unwrap();
        for (b, v) in bound.iter_mut().zip(d.values()) {
            *b += v.norm() * dr;
        }
    }
    let diff = at(r2).sub(&at(r1)).unwrap();
    for (v, b) in diff.values().iter().zip(&bound) {
        assert!(v.norm() <= b * (1.0 + 1e-3) + 1e-15);
    }
}

#[test]
fn linear_means_converge_to_the_band_limited_field() {
    let (f, c) = cache_of(TestField::Hermite);
    let limit = c.reconstruct();
    let errors: Vec<f64> = (0..8)
        .map(|j| dist(&linear_riesz(&c, 2f64.powi(-j), 2.0).unwrap(), &limit))
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    // with r lambda_max < 1 and alpha = 0 the multiplier is 1 on the whole grid
    let full = linear_riesz(&c, 0.5 / grid().lambda_max(), 0.0).unwrap();
    assert!(dist(&full, &limit) < 1e-12 * norm(&limit));
    assert!(norm(&limit) <= 1.01 * norm(&f));
    assert!(linear_riesz(&c, 0.0, 1.0).is_err());
    assert!(linear_riesz(&c, 1.0, -1.0).is_err());
}

#[test]
fn general_multipliers() {
    let (_, c) = cache_of(TestField::Gaussian);
    // a wider window captures more of the field
    let narrow = norm(&general_multiplier(&c, |_| 1.0, 0.5, 1.0).unwrap());
    let wide = norm(&general_multiplier(&c, |_| 1.0, 0.1, 2.0).unwrap());
    assert!(wide > narrow && narrow > 0.0);
    // linear in m
    let m1 = general_multiplier(&c, |l| l, 0.2, 3.0).unwrap();
    let m2 = general_multiplier(&c, |l| 3.0 * l, 0.2, 3.0).unwrap();
    assert!(dist(&m1.scale(Complex64::new(3.0, 0.0)), &m2) < 1e-12 * norm(&m2));
    assert!(general_multiplier(&c, |_| 1.0, 1.0, 1.0).is_err());
    assert!(general_multiplier(&c, |_| 1.0, -0.5, 1.0).is_err());
}

#[test]
fn mismatched_caches_are_rejected() {
    let (_, c) = cache_of(TestField::Gaussian);
    let other = SpectralCache::build(
        &TestField::Gaussian.sample(GridSpec::new(1, 5.0, 5.0, 12, 12).unwrap()),
        &grid(),
    )
    .unwrap();
    assert!(bilinear_riesz(&c, &other, 1.0, 0.1).is_err());
}

#[test]
fn multiplier_kernel_scaling_law() {
    let phi = make_standard_bump(-1.0, 1.0, 4);
    let omega = GroupPoint::new(&[Complex64::new(0.4, -0.2)], 0.3).unwrap();
    let quad = KernelQuadrature { k_max: 64, richardson: false };
    let (rho, delta, r) = (1.0, 0.25, 1.0);
    for t in [0.5, 2.0, 3.0] {
        let a = multiplier_kernel(&phi, t * rho, t * delta, r, &omega, quad).unwrap().re;
        let b = multiplier_kernel(&phi, rho, delta, r / t, &omega, quad).unwrap().re;
        assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-300), "t = {t}: {a} vs {b}");
    }
    // the kernel concentrates as the window narrows: |K(0)| shrinks with delta
    let origin = GroupPoint::identity(1);
    let wide = multiplier_kernel(&phi, rho, 0.25, r, &origin, quad).unwrap().re.abs();
    let thin = multiplier_kernel(&phi, rho, 0.0625, r, &origin, quad).unwrap().re.abs();
    assert!(thin < wide);
}

#[test]
fn zero_field_gives_zero() {
    let z = SampledField::zeros(spec());
    let c = SpectralCache::build(&z, &grid()).unwrap();
    assert_eq!(norm(&bilinear_riesz(&c, &c, 2.0, 0.1).unwrap()), 0.0);
    assert_eq!(norm(&linear_riesz(&c, 0.1, 2.0).unwrap()), 0.0);
}
