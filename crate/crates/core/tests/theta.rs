mod common;

use std::f64::consts::PI;

use common::{c, rel, series_theta};
use dwbc::ThetaContext;
use num_complex::Complex64 as C;
use proptest::prelude::*;

const TAUS: [(f64, f64); 3] = [(0.0, 1.0), (0.3, 0.8), (0.5, 2.0)];

fn tau_strategy() -> impl Strategy<Value = C> {
    prop::sample::select(TAUS.to_vec()).prop_map(|(re, im)| c(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    // The τ-multiplier reaches e^{4π Im τ} over the neighbourhood, so that
    // residual is measured against the larger side. The bound relative to
    // |θ(u)| alone is exercised by the acceptance target.
    #[test]
    fn quasi_periodic(tau in tau_strategy(), x in -1.5..1.5f64, y in -1.5..1.5f64) {
        let ctx = ThetaContext::new(tau).unwrap();
        let u = c(x, 0.0) + tau * y;
        let t = ctx.theta(u);
        prop_assert!((ctx.theta(u + 1.0) + t).norm() < 1e-10 * t.norm().max(1.0));
        let shifted = ctx.theta(u + tau);
        let factor = (-C::i() * PI * (2.0 * u + tau)).exp();
        let scale = t.norm().max(shifted.norm()).max(1.0);
        prop_assert!((shifted + factor * t).norm() < 1e-10 * scale);
    }

    #[test]
    fn odd(tau in tau_strategy(), x in -2.0..2.0f64, y in -1.0..1.0f64) {
        let ctx = ThetaContext::new(tau).unwrap();
        let u = c(x, 0.0) + tau * y;
        prop_assert!(rel(ctx.theta(-u), -ctx.theta(u)) < 1e-12);
    }

    #[test]
    fn product_matches_series(tau in tau_strategy(), x in -0.5..0.5f64, y in -0.5..0.5f64) {
        let ctx = ThetaContext::new(tau).unwrap();
        let u = c(x, 0.0) + tau * y;
        prop_assert!(rel(ctx.theta(u), series_theta(tau, u)) < 1e-11);
    }

    #[test]
    fn nonzero_off_lattice(tau in tau_strategy(), x in 0.01..0.99f64, y in -0.45..0.45f64) {
        let ctx = ThetaContext::new(tau).unwrap();
        let u = c(x, 0.0) + tau * y;
        prop_assert!(ctx.theta(u).norm() > 1e-10);
        prop_assert!(!ctx.is_on_lattice(u, 1e-8));
    }
}

#[test]
fn vanishes_on_lattice() {
    for (re, im) in TAUS {
        let tau = c(re, im);
        let ctx = ThetaContext::new(tau).unwrap();
        for m in -2..=2 {
            for k in -2..=2 {
                let point = tau * k as f64 + m as f64;
                assert!(ctx.theta(point).norm() < 1e-10, "τ={tau}, {m}+{k}τ");
                assert!(ctx.is_on_lattice(point, 1e-10));
            }
        }
    }
}

#[test]
fn normalized_derivative() {
    for tau in [c(0.0, 1.0), c(0.5, 2.0), c(0.0, 10.0), c(0.3, 0.8)] {
        let d = ThetaContext::new(tau).unwrap().theta_deriv_at_zero();
        assert!((d - 1.0).norm() < 1e-9, "τ={tau}: {d}");
    }
}

#[test]
fn golden_values() {
    // 30-digit references from the alternating series in extended precision.
    let cases = [
        (c(0.0, 1.0), c(0.25, 0.0), c(0.22592445084764341695587810491, 0.0)),
        (
            c(0.3, 0.8),
            c(0.23, 0.11),
            c(0.219745018610754517623550948752, 0.0847079977588764199586452549978),
        ),
        (
            c(0.0, 1.0),
            c(0.37, 0.21),
            c(0.360808656308267822614217604523, 0.0920851723742849432567034674773),
        ),
    ];
    for (tau, u, expected) in cases {
        let ctx = ThetaContext::new(tau).unwrap();
        assert!(rel(ctx.theta(u), expected) < 1e-13, "θ({u}|{tau})");
        assert!(rel(series_theta(tau, u), expected) < 1e-13);
    }
}

#[test]
fn integer_shift_flips_sign() {
    let ctx = ThetaContext::new(c(0.3, 0.8)).unwrap();
    let u = c(0.23, 0.11);
    assert!(rel(ctx.theta(u + 1.0), -ctx.theta(u)) < 1e-12);
}

#[test]
fn trigonometric_limit() {
    let ctx = ThetaContext::new(c(0.0, 10.0)).unwrap();
    for k in 0..=40 {
        let u = -0.5 + k as f64 / 40.0;
        let limit = (PI * u).sin() / PI;
        assert!((ctx.theta(c(u, 0.0)) - limit).norm() < 1e-6, "u={u}");
    }
    assert!((ctx.theta(c(0.5, 0.0)) - 1.0 / PI).norm() < 1e-6);
}

#[test]
fn large_imaginary_part_stays_accurate() {
    // Reduction keeps the relative error flat far from the real axis.
    let tau = c(0.0, 1.0);
    let ctx = ThetaContext::new(tau).unwrap();
    let u = c(0.37, 0.21);
    let base = ctx.theta(u);
    for k in [3_i32, 6, 9] {
        let shifted = u + tau * k as f64;
        let factor: C = (0..k)
            .map(|m| -(-C::i() * PI * (2.0 * (u + tau * m as f64) + tau)).exp())
            .product();
        assert!(rel(ctx.theta(shifted), factor * base) < 1e-11, "k={k}");
    }
}

#[test]
fn rejects_lower_half_plane() {
    assert!(ThetaContext::new(c(0.0, -1.0)).is_err());
    assert!(ThetaContext::new(c(0.2, 0.0)).is_err());
    assert!(ThetaContext::new(c(f64::NAN, 1.0)).is_err());
}
