use crcap_core::channel::{
    calibrate, cr_rate, interference_coefficient, power_loss_approx, power_loss_exact,
    sample_channel, FadingSample,
};
use crcap_core::geometry::{make_drop, ratio_cdf_coeffs, ratio_cdf_eval};
use crcap_core::numerics::RandomStream;
use crcap_core::SystemParams;
use proptest::prelude::*;

fn snr() -> impl Strategy<Value = f64> {
    (-12.0f64..12.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #[test]
    fn exact_loss_is_below_one_and_below_approximation(s in snr(), t in snr()) {
        let exact = power_loss_exact(s, t).unwrap();
        let approx = power_loss_approx(s, t).unwrap();
        prop_assert!((0.0..1.0).contains(&exact));
        prop_assert!(exact <= approx);
    }

    #[test]
    fn exact_loss_increases_with_both_snrs(s in snr(), t in snr(), k in 1.01f64..100.0) {
        let base = power_loss_exact(s, t).unwrap();
        prop_assert!(power_loss_exact(k * s, t).unwrap() >= base);
        prop_assert!(power_loss_exact(s, k * t).unwrap() >= base);
    }

    #[test]
    fn exact_loss_matches_printed_form(s in snr(), st in -3.0f64..3.0) {
        // (s/t)·((√(1 + t(1+s)) − 1)/(1 + s))², only where t(1+s) is large
        // enough for the subtraction to keep its digits.
        let t = 10f64.powf(st) / s;
        prop_assume!(t * (1.0 + s) > 1e-4);
        let alpha = power_loss_exact(s, t).unwrap();
        let printed = (s / t) * (((1.0 + t * (1.0 + s)).sqrt() - 1.0) / (1.0 + s)).powi(2);
        prop_assert!((alpha - printed).abs() <= 1e-8 * alpha, "{} vs {}", alpha, printed);
    }

    #[test]
    fn rate_decreases_with_power_loss(gain in 1e-3f64..1e6, c in 1e-4f64..20.0, a in 0.0f64..0.99) {
        let p = SystemParams::default();
        let r0 = cr_rate(gain, c, 0.0, &p).unwrap();
        let r1 = cr_rate(gain, c, a, &p).unwrap();
        prop_assert!(r1 <= r0 && r1 >= 0.0);
    }

    #[test]
    fn interference_coefficient_ignores_powers(seed in any::<u64>(), p_c in 1e-3f64..1e3, p_p in 1e-3f64..1e3) {
        let base = SystemParams { a_p: 1e12, a_c: 1e8, ..SystemParams::default() };
        let scaled = SystemParams { p_c, p_p, ..base };
        let mut s = RandomStream::new(seed, 0);
        let drop = make_drop(&base, &mut s).unwrap();
        let fading = FadingSample::draw(&mut s);
        let a = interference_coefficient(&drop, &fading, &base);
        let b = interference_coefficient(&drop, &fading, &scaled);
        prop_assert!((a - b).abs() <= 1e-12 * a);
        let ch = sample_channel(&drop, &fading, &scaled).unwrap();
        prop_assert_eq!(ch.low_interference, a < 1.0);
        if let (Some(x), Some(y)) = (ch.alpha, ch.alpha_approx) {
            prop_assert!(x <= y);
        }
    }

    #[test]
    fn ratio_cdf_is_monotone(r_0 in 0.1f64..10.0, kc in 1.5f64..50.0, kp in 1.0f64..50.0, x in 1e-4f64..1e3, dx in 1e-6f64..10.0) {
        let params = SystemParams { r_0, r_c: r_0 * kc, r_p: r_0 * kc * kp, ..SystemParams::default() };
        let coeffs = ratio_cdf_coeffs(&params).unwrap();
        let lo = ratio_cdf_eval(&coeffs, x).unwrap();
        let hi = ratio_cdf_eval(&coeffs, x + dx).unwrap();
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!(hi >= lo - 1e-12);
    }
}

#[test]
fn loss_rejects_non_positive_snr() {
    assert!(power_loss_exact(-1.0, 1.0).is_err());
    assert!(power_loss_exact(1.0, f64::NAN).is_err());
    assert!(cr_rate(1.0, 1.0, 1.0, &SystemParams::default()).is_err());
}

#[test]
fn calibration_is_deterministic_and_scales_with_noise() {
    let p = SystemParams::default();
    let a = calibrate(&p, 200_000, &mut RandomStream::new(1, 9)).unwrap();
    let b = calibrate(&p, 200_000, &mut RandomStream::new(1, 9)).unwrap();
    assert_eq!(a, b);
    let noisy = SystemParams { n_p: 4.0, ..p };
    let c = calibrate(&noisy, 200_000, &mut RandomStream::new(1, 9)).unwrap();
    assert!((c.a_p / a.a_p - 4.0).abs() < 1e-12);
    let ratio = a.a_c / a.a_p;
    assert!((ratio - (p.r_p / p.r_c).powf(-p.gamma)).abs() < 1e-12 * ratio);
    assert!(calibrate(&p, 1000, &mut RandomStream::new(1, 9)).is_err());
}
