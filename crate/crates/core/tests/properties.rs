use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;

use hriesz::bump::{
    make_lp_beta, make_riesz_splitting, make_unity_partition, taylor_reconstruct, BumpFunction, TaylorPoint,
};
use hriesz::experiments::{format_float, ExperimentReport, Row};
use hriesz::field::{GridSpec, SampledField};
use hriesz::hgroup::GroupPoint;
use hriesz::spectral::{laguerre_poly, LaguerreTable};

const ALPHAS: [f64; 5] = [0.0, 1.0, 2.0, 3.5, 5.0];

// Building a bump samples its C^N norm, so each is built once.
fn unity() -> &'static BumpFunction {
    static B: OnceLock<BumpFunction> = OnceLock::new();
    B.get_or_init(|| make_unity_partition(6))
}

fn beta() -> &'static BumpFunction {
    static B: OnceLock<BumpFunction> = OnceLock::new();
    B.get_or_init(|| make_lp_beta(6))
}

fn splittings() -> &'static [(BumpFunction, BumpFunction)] {
    static S: OnceLock<Vec<(BumpFunction, BumpFunction)>> = OnceLock::new();
    S.get_or_init(|| ALPHAS.iter().map(|&a| make_riesz_splitting(a, 8)).collect())
}

fn point(n: usize) -> impl Strategy<Value = GroupPoint> {
    proptest::collection::vec(-20.0f64..20.0, 2 * n + 1).prop_map(|c| GroupPoint::from_coords(c).unwrap())
}

fn triple() -> impl Strategy<Value = (GroupPoint, GroupPoint, GroupPoint)> {
    (1usize..4).prop_flat_map(|n| (point(n), point(n), point(n)))
}

fn close(a: &GroupPoint, b: &GroupPoint, tol: f64) -> bool {
    a.coords().iter().zip(b.coords()).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

proptest! {
    #[test]
    fn group_law_is_associative((x, y, z) in triple()) {
        let l = x.mul(&y).unwrap().mul(&z).unwrap();
        let r = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert!(close(&l, &r, 1e-12));
    }

    #[test]
    fn inverses_cancel(x in (1usize..4).prop_flat_map(point)) {
        let e = GroupPoint::identity(x.n());
        prop_assert_eq!(x.mul(&x.inv()).unwrap(), e.clone());
        prop_assert_eq!(x.inv().inv(), x);
    }

    #[test]
    fn dilations_are_automorphisms((x, y, _) in triple(), r in 0.05f64..20.0) {
        let l = x.mul(&y).unwrap().dilate(r).unwrap();
        let rr = x.dilate(r).unwrap().mul(&y.dilate(r).unwrap()).unwrap();
        prop_assert!(close(&l, &rr, 1e-12));
        let back = x.dilate(r).unwrap().dilate(1.0 / r).unwrap();
        prop_assert!(close(&back, &x, 1e-12));
    }

    #[test]
    fn norm_is_homogeneous_symmetric_and_subadditive((x, y, _) in triple(), r in 0.05f64..20.0) {
        let nx = x.norm();
        prop_assert!((x.dilate(r).unwrap().norm() - r * nx).abs() <= 1e-12 * r * nx.max(1e-300));
        prop_assert!((x.inv().norm() - nx).abs() <= 1e-14 * nx.max(1.0));
        prop_assert!(x.mul(&y).unwrap().norm() <= (nx + y.norm()) * (1.0 + 1e-14));
    }

    #[test]
    fn laguerre_table_matches_scalar(k in 0usize..30, n in 1usize..4, t in 0.0f64..40.0) {
        let table = LaguerreTable::new(n, 30).values(t);
        let scalar = laguerre_poly(k, n - 1, t);
        prop_assert!((table[k] - scalar).abs() <= 1e-12 * scalar.abs().max(1.0));
    }

    #[test]
    fn laguerre_derivative_identity(k in 1usize..20, a in 0usize..3, t in 0.0f64..30.0) {
        // L_k^a(t) = L_k^{a+1}(t) - L_{k-1}^{a+1}(t)
        let lhs = laguerre_poly(k, a, t);
        let rhs = laguerre_poly(k, a + 1, t) - laguerre_poly(k - 1, a + 1, t);
        let scale = laguerre_poly(k, a + 1, t).abs().max(laguerre_poly(k - 1, a + 1, t).abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
    }

    #[test]
    fn unity_partition_sums_to_one(t in -5.0f64..5.0) {
        let s: f64 = (-8..=8).map(|l| unity().value(t + l as f64)).sum();
        prop_assert!((s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn lp_partition_sums_to_one(e in -5.0f64..5.0) {
        let t = 2f64.powf(e);
        let s: f64 = (-10..=10).map(|m| beta().value(2f64.powi(-m) * t)).sum();
        prop_assert!((s - 1.0).abs() <= 1e-12);
        prop_assert!(beta().value(t) >= 0.0);
    }

    #[test]
    fn riesz_splitting_is_exact(t in 0.0f64..0.999, i in 0usize..ALPHAS.len()) {
        let (psi, psi0) = &splittings()[i];
        let alpha = ALPHAS[i];
        let mut s = psi0.value(t);
        for k in 2..40 {
            let d = 2f64.powi(-k);
            s += d.powf(alpha) * psi.value((1.0 - t) / d);
        }
        prop_assert!((s - (1.0 - t).powf(alpha)).abs() <= 1e-12);
    }

    #[test]
    fn taylor_order_zero_is_the_centre_value(
        sigma in 0.6f64..0.95, rho in 0.1f64..0.5, u1 in 0.0f64..0.5, u2 in 0.0f64..0.5
    ) {
        let psi = &splittings()[3].0;
        let delta = 1.0 / 16.0;
        let p = TaylorPoint { sigma, rho, u1, u2 };
        let (approx, _) = taylor_reconstruct(psi, delta, 2.0, 0, p);
        prop_assert_eq!(approx, psi.value((1.0 - sigma) / delta));
    }

    #[test]
    fn csv_floats_round_trip(v in proptest::num::f64::ANY) {
        let s = format_float(v);
        let back: f64 = match s.as_str() {
            "nan" => f64::NAN,
            "inf" => f64::INFINITY,
            "-inf" => f64::NEG_INFINITY,
            other => other.parse().unwrap(),
        };
        prop_assert!(back == v || (back.is_nan() && v.is_nan()));
    }

    #[test]
    fn csv_rows_have_one_line_each(values in proptest::collection::vec(-1e6f64..1e6, 1..20)) {
        let mut report = ExperimentReport::new("hash".into());
        for (i, v) in values.iter().enumerate() {
            report.push(Row::new("prop/row").param("i", i).measure("v", *v).check(*v >= 0.0));
        }
        let csv = report.to_csv();
        prop_assert_eq!(csv.lines().count(), values.len() + 1);
        prop_assert!(!csv.contains('\r'));
        let width = csv.lines().next().unwrap().split(',').count();
        prop_assert!(csv.lines().all(|l| l.split(',').count() == width));
    }
}

#[test]
fn dilate_field_matches_exact_samples_inside() {
    let spec = GridSpec::new(1, 4.0, 4.0, 40, 40).unwrap();
    let g = |x: &[f64]| Complex64::new((-x[0] * x[0] - x[1] * x[1] - x[2] * x[2]).exp(), 0.0);
    let f = SampledField::from_fn(spec, g);
    for s in [0.5, 0.8, 1.25] {
        let resampled = f.dilate_field(s).unwrap();
        let exact = SampledField::from_fn(spec, |x| g(&[s * x[0], s * x[1], s * s * x[2]]));
        let mask = SampledField::interior_mask(&spec, 0.5, 0.5);
        let err = resampled.sub(&exact).unwrap().lp_norm_masked(2.0, &mask).unwrap()
            / exact.lp_norm_masked(2.0, &mask).unwrap();
        // multilinear interpolation is second order in h = 0.2
        assert!(err < 2e-2, "s = {s}: {err:e}");
    }
    assert!(f.dilate_field(0.0).is_err());
}

#[test]
fn dilation_scales_lp_norms_by_the_homogeneous_dimension() {
    // ||f(delta_s .)||_p = s^{-Q/p} ||f||_p with Q = 4 for n = 1
    let g = |x: &[f64], s: f64| {
        Complex64::new((-(s * x[0]).powi(2) - (s * x[1]).powi(2) - (s * s * x[2]).powi(2)).exp(), 0.0)
    };
    let spec = GridSpec::new(1, 6.0, 6.0, 48, 48).unwrap();
    let base = SampledField::from_fn(spec, |x| g(x, 1.0)).lp_norm(2.0).unwrap();
    let s = 1.5;
    let scaled = SampledField::from_fn(spec, |x| g(x, s)).lp_norm(2.0).unwrap();
    assert!((scaled / base - s.powf(-2.0)).abs() < 1e-6);
}
