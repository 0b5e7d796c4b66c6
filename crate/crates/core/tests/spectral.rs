use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use hriesz::bump::make_lp_beta;
use hriesz::field::{GridSpec, SampledField};
use hriesz::spectral::{laguerre_poly, littlewood_paley_project, p_lambda, spectral_piece, SpectralCache, SpectralGrid};

fn hermite_gaussian(spec: GridSpec) -> SampledField {
    SampledField::from_fn(spec, |x| {
        let d = x.len() - 1;
        let r2: f64 = x[..d].iter().map(|v| v * v).sum();
        Complex64::new(2.0 * x[d] * (-r2 - x[d] * x[d]).exp(), 0.0)
    })
}

fn rel(a: &SampledField, b: &SampledField) -> f64 {
    a.sub(b).unwrap().lp_norm(2.0).unwrap() / b.lp_norm(2.0).unwrap()
}

/// `L_k^a(t) = sum_j (-1)^j binom(k + a, k - j) t^j / j!` in exact rationals.
fn laguerre_exact(k: usize, a: usize, t: &BigRational) -> BigRational {
    let mut sum = BigRational::zero();
    let mut power = BigRational::one();
    let mut fact = BigInt::one();
    for j in 0..=k {
        if j > 0 {
            power *= t;
            fact *= BigInt::from(j);
        }
        let mut binom = BigInt::one();
        for i in 0..(k - j) {
            binom = binom * BigInt::from(k + a - i) / BigInt::from(i + 1);
        }
        let term = BigRational::new(binom, fact.clone()) * &power;
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

#[test]
fn laguerre_agrees_with_exact_rational_sum() {
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for quarter in (0..=200).step_by(7) {
            let t = BigRational::new(BigInt::from(quarter), BigInt::from(4));
            let tf = quarter as f64 / 4.0;
            let mut peak: f64 = 1.0;
            for k in 0..=32 {
                let exact = laguerre_exact(k, a, &t).to_f64().unwrap();
                peak = peak.max(exact.abs());
                // Relative to the largest |L_j(t)| seen so far, since
                // individual values may sit near a zero.
                worst = worst.max((laguerre_poly(k, a, tf) - exact).abs() / peak);
            }
        }
    }
    assert!(worst < 1e-12, "worst scaled error {worst:e}");
}

#[test]
fn laguerre_pieces_are_orthogonal_and_idempotent() {
    let spec = GridSpec::new(1, 8.0, 6.0, 32, 24).unwrap();
    let f = hermite_gaussian(spec);
    let mu = 1.0;
    let p0 = spectral_piece(&f, 0, mu).unwrap();
    let p1 = spectral_piece(&f, 1, mu).unwrap();
    let cross = p0.inner(&p1).unwrap().norm();
    let scale = p0.lp_norm(2.0).unwrap() * p1.lp_norm(2.0).unwrap();
    assert!(cross < 1e-3 * scale, "cross {cross:e} vs {scale:e}");

    // Applying the same piece twice is a fixed multiple of applying it once.
    let twice = spectral_piece(&p0, 0, mu).unwrap();
    let c = twice.inner(&p0).unwrap() / p0.inner(&p0).unwrap();
    let resid = twice.sub(&p0.scale(c)).unwrap().lp_norm(2.0).unwrap();
    assert!(resid < 1e-3 * twice.lp_norm(2.0).unwrap());
    // and the two orders give zero
    let mixed = spectral_piece(&p0, 1, mu).unwrap();
    assert!(mixed.lp_norm(2.0).unwrap() < 1e-3 * twice.lp_norm(2.0).unwrap());
}

#[test]
fn p_lambda_of_a_real_field_is_real() {
    let spec = GridSpec::new(1, 5.0, 5.0, 16, 16).unwrap();
    let f = hermite_gaussian(spec);
    let p = p_lambda(&f, 1.3, 8).unwrap();
    assert!(p.is_real());
    assert!(p.lp_norm(2.0).unwrap() > 0.0);
    assert!(p_lambda(&f, 0.0, 8).is_err());
    assert!(p_lambda(&f, -1.0, 8).is_err());
}

#[test]
fn frequencies_above_nyquist_are_dropped() {
    let spec = GridSpec::new(1, 5.0, 5.0, 16, 16).unwrap();
    let f = hermite_gaussian(spec);
    // k = 0 alone, frequency lambda / n beyond pi / h_t
    let lambda = 1.5 * spec.t_nyquist();
    let p = p_lambda(&f, lambda, 0).unwrap();
    assert!(p.values().iter().all(|v| *v == Complex64::new(0.0, 0.0)));
}

#[test]
fn cache_reconstructs_the_field() {
    let spec = GridSpec::new(1, 6.0, 6.0, 32, 32).unwrap();
    let f = hermite_gaussian(spec);
    let grid = SpectralGrid::composite(1, 32, 0.05, 24.0, 8, 8).unwrap();
    let cache = SpectralCache::build(&f, &grid).unwrap();
    let err = rel(&cache.reconstruct(), &f);
    assert!(err < 1e-2, "reconstruction error {err:e}");

    // Littlewood-Paley pieces sum back to the same field.
    let beta = make_lp_beta(8);
    let mut sum = SampledField::zeros(spec);
    for m in -10..=10 {
        let piece = littlewood_paley_project(&cache, m, &beta);
        sum = sum.combine(Complex64::new(1.0, 0.0), &piece, Complex64::new(1.0, 0.0)).unwrap();
    }
    let lp_err = rel(&sum, &cache.reconstruct());
    assert!(lp_err < 1e-6, "Littlewood-Paley sum error {lp_err:e}");

    // A capped build refuses what does not fit.
    assert!(SpectralCache::build_capped(&f, &grid, 1024).is_err());
}
