mod common;

use std::f64::consts::E;

use common::{rho_by_quadrature, tau_by_quadrature};
use condembed_core::{lambert_w0, rho, tau, StableThreshold};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn frozen_values_agree_with_quadrature() {
    // The constants used in the unit tests were produced by this oracle.
    assert!(rel(tau_by_quadrature(0.0, -2.0), 0.4323323583816936) < 1e-12);
    assert!(rel(rho_by_quadrature(1.0, E), 1.5819767068693265) < 1e-12);
    assert!(rel(rho_by_quadrature(4.0, 1.0), 1.8483924814931874) < 1e-12);
    assert!(rel(1.8483924814931874, 4.0 * 4.0_f64.ln() / 3.0) < 1e-15);
}

#[test]
fn implementation_matches_quadrature_on_a_grid() {
    for &x in &[-20.0, -5.0, -1.0, -0.3, 0.0, 0.7, 2.0] {
        for &y in &[-20.0, -3.0, -1.0, -0.2999999, 0.0, 1.5] {
            let q = tau_by_quadrature(x, y);
            assert!(rel(tau(x, y).unwrap(), q) < 1e-11, "tau({x}, {y})");
        }
    }
    for &x in &[0.1, 1.0, E, 7.5, 400.0] {
        for &y in &[0.2, 1.0000001, 3.0, 1e4] {
            let q = rho_by_quadrature(x, y);
            assert!(rel(rho(x, y).unwrap(), q) < 1e-11, "rho({x}, {y})");
        }
    }
}

#[test]
fn near_equal_arguments_match_high_precision_reference() {
    // tau(x, x + h) = e^x (e^h - 1) / h; reference series to O(h^6)
    for &x in &[-10.0_f64, -1.0, 0.0, 3.0] {
        for &h in &[1e-12_f64, 1e-9, 3e-7, 2e-6, 1e-4] {
            let series = 1.0 + h / 2.0 + h * h / 6.0 + h * h * h / 24.0 + h.powi(4) / 120.0 + h.powi(5) / 720.0;
            let reference = x.exp() * series;
            assert!(rel(tau(x + h, x).unwrap(), reference) < 1e-13, "x={x} h={h}");
        }
    }
    // rho(x, y) = x ln(1 + u) / u with u = (x - y) / y; reference series to O(u^5)
    for &y in &[0.1_f64, 1.0, 50.0] {
        for &u in &[1e-12_f64, 1e-9, 5e-7, 2e-6, 1e-4] {
            let x = y * (1.0 + u);
            let u = (x - y) / y;
            let l = 1.0 - u / 2.0 + u * u / 3.0 - u.powi(3) / 4.0 + u.powi(4) / 5.0 - u.powi(5) / 6.0;
            assert!(rel(rho(x, y).unwrap(), x * l) < 1e-13, "y={y} u={u}");
        }
    }
}

#[test]
fn series_switch_is_continuous() {
    for &base in &[0.3_f64, 1.0, 2.5, 9.0] {
        for &gap in &[5e-7, 1e-6, 2e-6, 5e-5] {
            let below = StableThreshold::new(gap * 0.99).unwrap();
            let above = StableThreshold::new(gap * 1.01).unwrap();
            let x = base * (1.0 + gap);
            let a = below.rho(x, base).unwrap();
            let b = above.rho(x, base).unwrap();
            assert!(rel(a, b) < 1e-12, "rho base {base} gap {gap}");
            let x = base + gap * base.max(1.0);
            let a = below.tau(x, base).unwrap();
            let b = above.tau(x, base).unwrap();
            assert!(rel(a, b) < 1e-12, "tau base {base} gap {gap}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn rho_between_arguments(x in 0.1..10.0_f64, y in 0.1..10.0_f64) {
        let r = rho(x, y).unwrap();
        prop_assert!(x.min(y) <= r && r <= x.max(y));
    }

    #[test]
    fn rho_homogeneous(x in 0.1..10.0_f64, y in 0.1..10.0_f64, l in prop::sample::select(vec![0.5, 2.0, 10.0])) {
        let r = rho(x, y).unwrap();
        prop_assert!(rel(rho(l * x, l * y).unwrap(), l * r) < 1e-12);
    }

    #[test]
    fn rho_increasing(x in 0.1..10.0_f64, y in 0.1..10.0_f64, dx in 0.0..5.0_f64, dy in 0.0..5.0_f64) {
        prop_assert!(rho(x, y).unwrap() <= rho(x + dx, y + dy).unwrap() + 1e-14);
    }

    #[test]
    fn kernels_symmetric(x in 0.1..10.0_f64, y in 0.1..10.0_f64) {
        prop_assert_eq!(rho(x, y).unwrap(), rho(y, x).unwrap());
        prop_assert_eq!(tau(-x, -y).unwrap(), tau(-y, -x).unwrap());
    }

    #[test]
    fn rho_tau_identity(x in 0.1..10.0_f64, y in 0.1..10.0_f64) {
        let prod = rho(x, y).unwrap() * tau(1.0 - x.ln(), 1.0 - y.ln()).unwrap();
        prop_assert!(rel(prod, E) < 1e-12);
    }

    #[test]
    fn w0_round_trip(w in 0.0..20.0_f64) {
        let back = lambert_w0(w * w.exp()).unwrap();
        prop_assert!((back - w).abs() <= 1e-13 * w);
    }

    #[test]
    fn w0_inverts(t in 0.0..1e12_f64) {
        let w = lambert_w0(t).unwrap();
        prop_assert!(w >= 0.0);
        if t > 0.0 {
            prop_assert!(rel(w * w.exp(), t) < 1e-14 * (1.0 + w));
        }
    }
}
