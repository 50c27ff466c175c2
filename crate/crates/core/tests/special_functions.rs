mod common;

use common::{composite_gl, log_grid};
use crcap_core::numerics::{bessel_k, integrate, one_minus_z_k1, std_normal_cdf};

/// Upper normal tail via `Q(x) = φ(x)·∫_0^∞ e^{−xu − u²/2} du`.
fn normal_tail_oracle(x: f64) -> f64 {
    let len = 12.0_f64.min(60.0 / x.max(1e-3));
    let inner = composite_gl(|u| (-x * u - 0.5 * u * u).exp(), 0.0, len, 200);
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt() * inner
}

/// `e^x·K_ν(x) = ∫_0^∞ e^{−x(cosh t − 1)} cosh(νt) dt`.
fn scaled_bessel_k_oracle(order: u32, x: f64) -> f64 {
    let upper = (1.0 + 800.0 / x).acosh();
    composite_gl(
        |t| (-x * (t.cosh() - 1.0)).exp() * (order as f64 * t).cosh(),
        0.0,
        upper,
        400,
    )
}

#[test]
fn normal_cdf_matches_integral_oracle_on_log_grid() {
    for x in log_grid(1e-3, 30.0, 200) {
        let q = normal_tail_oracle(x);
        let lower = std_normal_cdf(-x).unwrap();
        let upper = std_normal_cdf(x).unwrap();
        assert!(
            (lower - q).abs() <= 1e-8 * q,
            "Φ(-{x}) = {lower}, oracle {q}"
        );
        assert!(
            (upper - (1.0 - q)).abs() <= 1e-8 * (1.0 - q),
            "Φ({x}) = {upper}"
        );
    }
}

#[test]
fn normal_cdf_limits() {
    assert_eq!(std_normal_cdf(0.0).unwrap(), 0.5);
    assert_eq!(std_normal_cdf(f64::INFINITY).unwrap(), 1.0);
    assert_eq!(std_normal_cdf(f64::NEG_INFINITY).unwrap(), 0.0);
    assert!(std_normal_cdf(f64::NAN).is_err());
}

#[test]
fn bessel_k_matches_integral_oracle_on_log_grid() {
    for order in [0, 1] {
        for x in log_grid(1e-3, 50.0, 200) {
            let oracle = scaled_bessel_k_oracle(order, x) * (-x).exp();
            let k = bessel_k(order, x).unwrap();
            assert!(
                (k - oracle).abs() <= 1e-8 * oracle,
                "K{order}({x}) = {k}, oracle {oracle}"
            );
        }
    }
}

#[test]
fn bessel_k_rejects_bad_input() {
    assert!(bessel_k(0, 0.0).is_err());
    assert!(bessel_k(1, -1.0).is_err());
    assert!(bessel_k(2, 1.0).is_err());
}

#[test]
fn one_minus_z_k1_matches_direct_form() {
    for z in log_grid(1e-2, 40.0, 120) {
        let direct = 1.0 - z * scaled_bessel_k_oracle(1, z) * (-z).exp();
        let got = one_minus_z_k1(z).unwrap();
        // The direct form loses digits to cancellation at small z.
        let tol = 1e-12 / direct.max(1e-300) + 1e-9;
        assert!(
            (got - direct).abs() <= tol * direct,
            "z={z}: {got} vs {direct}"
        );
    }
    assert_eq!(one_minus_z_k1(0.0).unwrap(), 0.0);
    // Leading behaviour −(z²/2)·ln z for small z.
    let z: f64 = 1e-6;
    let lead = 0.5 * z * z * (-(z / 2.0).ln() + 0.5 - 0.5772156649015329);
    assert!((one_minus_z_k1(z).unwrap() / lead - 1.0).abs() < 1e-6);
}

#[test]
fn quadrature_reproduces_known_integrals() {
    let q = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 1e-12).unwrap();
    assert!((q.value - 2.0).abs() < 1e-12);
    let q = integrate(
        |x: f64| (-x * x).exp(),
        f64::NEG_INFINITY,
        f64::INFINITY,
        1e-12,
        1e-12,
    )
    .unwrap();
    assert!((q.value - std::f64::consts::PI.sqrt()).abs() < 1e-11);
    let q = integrate(
        |x: f64| 1.0 / (1.0 + x * x),
        0.0,
        f64::INFINITY,
        1e-12,
        1e-12,
    )
    .unwrap();
    assert!((q.value - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    let q = integrate(|x: f64| x.sqrt().ln(), 0.0, 1.0, 1e-10, 1e-10).unwrap();
    assert!((q.value + 0.5).abs() < 1e-9);
}
