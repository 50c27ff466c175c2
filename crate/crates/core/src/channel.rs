//! Per-realization channel quantities: the interference coefficient `a`,
//! the power-loss parameter α and its small-signal approximation, the CR
//! rate, and the calibration of the gain constants.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::{sample_annulus_radius, Drop, SystemParams};
use crate::numerics::RandomStream;

/// Target PP-link SNR (5 dB) met by the calibrated gain constant.
pub const CALIBRATION_SNR_DB: f64 = 5.0;
/// Fraction of PP-link draws meeting the target SNR after calibration.
pub const CALIBRATION_COVERAGE: f64 = 0.95;
pub const MIN_CALIBRATION_SAMPLES: usize = 100_000;

/// Unit-mean exponential power draws for the four links.
///
/// `g_sq` (PU→CR) is drawn to keep the four-link model whole but no
/// quantity computed here depends on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSample {
    pub p_sq: f64,
    pub g_sq: f64,
    pub f_sq: f64,
    pub c_sq: f64,
}

impl FadingSample {
    /// Draws `p, g, f, c` in that order.
    pub fn draw(stream: &mut RandomStream) -> Self {
        Self {
            p_sq: stream.unit_exponential(),
            g_sq: stream.unit_exponential(),
            f_sq: stream.unit_exponential(),
            c_sq: stream.unit_exponential(),
        }
    }
}

/// Derived quantities for one drop and one fading draw.
///
/// `alpha`, `alpha_approx` and `rate_cr` are only defined inside the
/// low-interference regime (`a < 1`) and are `None` outside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSample {
    pub a: f64,
    pub s_sq: f64,
    pub t_sq: f64,
    pub alpha: Option<f64>,
    pub alpha_approx: Option<f64>,
    pub rate_cr: Option<f64>,
    pub low_interference: bool,
}

/// Calibrated gain constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub a_p: f64,
    pub a_c: f64,
    /// Empirical 5% quantile of `e^{X_pp}·r_pp^{-γ}·|p̃|²`.
    pub quantile: f64,
    pub samples: usize,
}

impl Calibration {
    pub fn apply(&self, params: &SystemParams) -> SystemParams {
        SystemParams {
            a_p: self.a_p,
            a_c: self.a_c,
            ..*params
        }
    }
}

/// Chooses `A_p` so that the PP link reaches 5 dB SNR 95% of the time, and
/// sets `A_c = A_p·(R_p/R_c)^{-γ}` (equal received power at both cell edges).
///
/// `params.a_p`/`params.a_c` are ignored. Each draw consumes one uniform,
/// one normal and one exponential from `stream`.
pub fn calibrate(
    params: &SystemParams,
    samples: usize,
    stream: &mut RandomStream,
) -> Result<Calibration> {
    if samples < MIN_CALIBRATION_SAMPLES {
        return Err(domain(format!(
            "calibration needs at least {MIN_CALIBRATION_SAMPLES} samples, got {samples}"
        )));
    }
    SystemParams {
        a_p: 1.0,
        a_c: 1.0,
        ..*params
    }
    .validate()?;
    let sigma = params.sigma_sf();
    let mut draws: Vec<f64> = (0..samples)
        .map(|_| {
            let r = sample_annulus_radius(params.r_0, params.r_p, stream);
            let x = sigma * stream.std_normal();
            let p = stream.unit_exponential();
            x.exp() * r.powf(-params.gamma) * p
        })
        .collect();
    // Smallest value such that at least 95% of the draws are >= it.
    let k = ((1.0 - CALIBRATION_COVERAGE) * samples as f64).ceil() as usize;
    let idx = k.saturating_sub(1);
    let (_, q, _) = draws.select_nth_unstable_by(idx, f64::total_cmp);
    let quantile = *q;
    let snr = 10f64.powf(CALIBRATION_SNR_DB / 10.0);
    let a_p = snr * params.n_p / (params.p_p * quantile);
    let a_c = a_p * (params.r_p / params.r_c).powf(-params.gamma);
    Ok(Calibration {
        a_p,
        a_c,
        quantile,
        samples,
    })
}

/// Interference coefficient `a`; the regime is low-interference when `a < 1`.
///
/// Written in terms of shadowing and distances so that neither `A_c` nor
/// `P_c` enters the computation.
pub fn interference_coefficient(drop: &Drop, fading: &FadingSample, params: &SystemParams) -> f64 {
    (params.n_c / params.n_p).sqrt()
        * (0.5 * (drop.x_cp - drop.x_cc)).exp()
        * (drop.r_cp / drop.r_cc).powf(-0.5 * params.gamma)
        * (fading.f_sq / fading.c_sq).sqrt()
}

/// Exact power-loss fraction
/// `α = (s/t)·[(√(1+t(1+s)) − 1)/(1+s)]²`.
///
/// Evaluated through the equivalent `α = s·t/(1 + √(1+t(1+s)))²`, which has
/// no cancellation for small `t`.
pub fn power_loss_exact(s_sq: f64, t_sq: f64) -> Result<f64> {
    if !(s_sq > 0.0 && t_sq > 0.0) {
        return Err(domain(format!(
            "power loss needs positive SNRs, got s²={s_sq}, t²={t_sq}"
        )));
    }
    Ok(power_loss_exact_unchecked(s_sq, t_sq))
}

#[inline]
pub(crate) fn power_loss_exact_unchecked(s_sq: f64, t_sq: f64) -> f64 {
    let root = 1.0 + (1.0 + t_sq * (1.0 + s_sq)).sqrt();
    // Divide in steps so s·t cannot overflow before the normalization.
    (s_sq / root) * (t_sq / root)
}

/// Small-signal approximation `α_approx = s²·t²/4`.
pub fn power_loss_approx(s_sq: f64, t_sq: f64) -> Result<f64> {
    if !(s_sq > 0.0 && t_sq > 0.0) {
        return Err(domain(format!(
            "power loss needs positive SNRs, got s²={s_sq}, t²={t_sq}"
        )));
    }
    Ok(0.25 * s_sq * t_sq)
}

/// CR rate `log₂(1 + Γ_cc·|c̃|²·(1−α)·P_c/N_c)` in bits per channel use.
pub fn cr_rate(gain_cc: f64, c_sq: f64, alpha: f64, params: &SystemParams) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(domain(format!(
            "power-loss fraction must lie in [0, 1), got {alpha}"
        )));
    }
    Ok(cr_rate_unchecked(
        gain_cc * c_sq * params.p_c / params.n_c,
        alpha,
    ))
}

/// Rate from the α-free SNR `Γ_cc·|c̃|²·P_c/N_c`.
#[inline]
pub(crate) fn cr_rate_unchecked(snr_cc: f64, alpha: f64) -> f64 {
    (snr_cc * (1.0 - alpha)).ln_1p() / std::f64::consts::LN_2
}

/// PU SNR `|s|² = P_p·Γ_pp·|p̃|²/N_p`.
#[inline]
pub fn pu_snr(drop: &Drop, fading: &FadingSample, params: &SystemParams) -> f64 {
    params.p_p * drop.gain_pp * fading.p_sq / params.n_p
}

/// Cross SNR `|t|² = P_c·Γ_cp·|f̃|²/N_p`.
#[inline]
pub fn cross_snr(drop: &Drop, fading: &FadingSample, params: &SystemParams) -> f64 {
    params.p_c * drop.gain_cp * fading.f_sq / params.n_p
}

pub fn sample_channel(
    drop: &Drop,
    fading: &FadingSample,
    params: &SystemParams,
) -> Result<ChannelSample> {
    for v in [fading.p_sq, fading.g_sq, fading.f_sq, fading.c_sq] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(domain(format!(
                "fading powers must be positive and finite, got {v}"
            )));
        }
    }
    let sample = sample_channel_unchecked(drop, fading, params);
    if !(sample.a.is_finite() && sample.s_sq > 0.0 && sample.t_sq > 0.0) {
        return Err(domain("degenerate channel realization"));
    }
    Ok(sample)
}

#[inline]
pub(crate) fn sample_channel_unchecked(
    drop: &Drop,
    fading: &FadingSample,
    params: &SystemParams,
) -> ChannelSample {
    let a = interference_coefficient(drop, fading, params);
    let s_sq = pu_snr(drop, fading, params);
    let t_sq = cross_snr(drop, fading, params);
    let low_interference = a < 1.0;
    let (alpha, alpha_approx, rate_cr) = if low_interference {
        let alpha = power_loss_exact_unchecked(s_sq, t_sq);
        let snr_cc = drop.gain_cc * fading.c_sq * params.p_c / params.n_c;
        (
            Some(alpha),
            Some(0.25 * s_sq * t_sq),
            Some(cr_rate_unchecked(snr_cc, alpha)),
        )
    } else {
        (None, None, None)
    };
    ChannelSample {
        a,
        s_sq,
        t_sq,
        alpha,
        alpha_approx,
        rate_cr,
        low_interference,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_drop, Point};

    fn unit_drop() -> Drop {
        Drop {
            pu_tx: Point { x: 10.0, y: 0.0 },
            cr_rx: Point { x: 0.0, y: 20.0 },
            cr_tx: Point { x: 0.0, y: 10.0 },
            r_pp: 10.0,
            r_pc: 500f64.sqrt(),
            r_cc: 10.0,
            r_cp: 10.0,
            x_pp: 0.0,
            x_pc: 0.0,
            x_cc: 0.3,
            x_cp: 0.3,
            gain_pp: 1.0,
            gain_pc: 1.0,
            gain_cc: 1.0,
            gain_cp: 1.0,
        }
    }

    fn fading(f: f64, c: f64) -> FadingSample {
        FadingSample {
            p_sq: 1.0,
            g_sq: 1.0,
            f_sq: f,
            c_sq: c,
        }
    }

    #[test]
    fn symmetric_links_give_unit_a() {
        let p = SystemParams::default();
        let a = interference_coefficient(&unit_drop(), &fading(0.7, 0.7), &p);
        assert!((a - 1.0).abs() < 1e-15);
    }

    #[test]
    fn noise_ratio_scales_a() {
        let p = SystemParams {
            n_c: 1.0,
            n_p: 4.0,
            ..SystemParams::default()
        };
        let a = interference_coefficient(&unit_drop(), &fading(0.7, 0.7), &p);
        assert!((a - 0.5).abs() < 1e-15);
    }

    #[test]
    fn a_matches_gain_form_and_ignores_cr_power() {
        let p = SystemParams {
            a_p: 2e13,
            a_c: 7e9,
            n_c: 0.3,
            ..SystemParams::default()
        };
        let mut s = RandomStream::new(5, 0);
        for _ in 0..200 {
            let d = make_drop(&p, &mut s).unwrap();
            let fd = FadingSample::draw(&mut s);
            let a = interference_coefficient(&d, &fd, &p);
            let via_gains =
                (p.n_c * d.gain_cp * fd.f_sq).sqrt() / (p.n_p * d.gain_cc * fd.c_sq).sqrt();
            assert!((a / via_gains - 1.0).abs() < 1e-12);
            let boosted = SystemParams { p_c: 17.0, ..p };
            assert_eq!(a, interference_coefficient(&d, &fd, &boosted));
        }
    }

    #[test]
    fn exact_alpha_reference_values() {
        let a = power_loss_exact(1.0, 1.0).unwrap();
        let expected = ((3f64.sqrt() - 1.0) / 2.0).powi(2);
        assert!((a - expected).abs() < 1e-15);
        assert!((expected - 0.133_974_596).abs() < 1e-9);

        let printed =
            |s: f64, t: f64| (s / t) * (((1.0 + t * (1.0 + s)).sqrt() - 1.0) / (1.0 + s)).powi(2);
        let big = power_loss_exact(1e6, 1.0).unwrap();
        assert!((big - printed(1e6, 1.0)).abs() < 1e-12);
        assert!((big - 0.998_001).abs() < 1e-6);

        assert!(power_loss_exact(1e-300, 1.0).unwrap() < 1e-299);
        // Deep small-signal regime reduces to s·t/4.
        let tiny = power_loss_exact(3.0, 1e-14).unwrap();
        assert!((tiny / (0.75e-14) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_alpha_rejects_nonpositive() {
        assert!(power_loss_exact(0.0, 1.0).is_err());
        assert!(power_loss_exact(1.0, -1.0).is_err());
        assert!(power_loss_approx(1.0, 0.0).is_err());
    }

    #[test]
    fn approx_alpha_reference() {
        assert_eq!(power_loss_approx(1.0, 1.0).unwrap(), 0.25);
    }

    #[test]
    fn approx_is_accurate_in_small_signal_regime() {
        let mut s = RandomStream::new(9, 0);
        for _ in 0..100_000 {
            let s_sq = 10f64.powf(-4.0 + 8.0 * s.uniform());
            let t_sq = 10f64.powf(-10.0 + 10.0 * s.uniform());
            if t_sq * (1.0 + s_sq) < 0.01 {
                let exact = power_loss_exact(s_sq, t_sq).unwrap();
                let approx = power_loss_approx(s_sq, t_sq).unwrap();
                assert!((approx - exact) / exact < 0.01);
            }
        }
    }

    #[test]
    fn rate_reference_values() {
        let p = SystemParams::default();
        assert!((cr_rate(1.0, 1.0, 0.0, &p).unwrap() - 1.0).abs() < 1e-15);
        assert!((cr_rate(2.0, 1.0, 0.5, &p).unwrap() - 1.0).abs() < 1e-15);
        assert!(cr_rate(1.0, 1.0, 1.0 - 1e-15, &p).unwrap() < 1e-14);
        assert!(cr_rate(1.0, 1.0, 1.0, &p).is_err());
        assert!(cr_rate(1.0, 1.0, -0.1, &p).is_err());
    }

    #[test]
    fn composition_matches_parts() {
        let p = SystemParams {
            a_p: 2e13,
            a_c: 7e9,
            ..SystemParams::default()
        };
        let mut s = RandomStream::new(6, 0);
        let mut seen_low = false;
        for _ in 0..500 {
            let d = make_drop(&p, &mut s).unwrap();
            let fd = FadingSample::draw(&mut s);
            let ch = sample_channel(&d, &fd, &p).unwrap();
            assert_eq!(ch.a, interference_coefficient(&d, &fd, &p));
            assert_eq!(ch.low_interference, ch.a < 1.0);
            let s_sq = p.p_p * d.gain_pp * fd.p_sq / p.n_p;
            let t_sq = p.p_c * d.gain_cp * fd.f_sq / p.n_p;
            assert_eq!((ch.s_sq, ch.t_sq), (s_sq, t_sq));
            if ch.low_interference {
                seen_low = true;
                let alpha = power_loss_exact(s_sq, t_sq).unwrap();
                assert_eq!(ch.alpha, Some(alpha));
                assert_eq!(
                    ch.alpha_approx,
                    Some(power_loss_approx(s_sq, t_sq).unwrap())
                );
                let rate = cr_rate(d.gain_cc, fd.c_sq, alpha, &p).unwrap();
                assert!((ch.rate_cr.unwrap() - rate).abs() <= 1e-12 * rate.max(1.0));
            } else {
                assert!(ch.alpha.is_none() && ch.alpha_approx.is_none() && ch.rate_cr.is_none());
            }
        }
        assert!(seen_low);
    }

    #[test]
    fn calibration_rules() {
        let p = SystemParams::default();
        let c = calibrate(&p, 200_000, &mut RandomStream::new(1, 99)).unwrap();
        assert!((c.a_c / c.a_p - 10f64.powf(-3.5)).abs() < 1e-15 * 10f64.powf(-3.5) * 4.0);
        let doubled = SystemParams { p_p: 2.0, ..p };
        let c2 = calibrate(&doubled, 200_000, &mut RandomStream::new(1, 99)).unwrap();
        assert_eq!(c2.a_p, 0.5 * c.a_p);
        assert!(calibrate(&p, 1000, &mut RandomStream::new(1, 99)).is_err());
        let applied = c.apply(&p);
        assert_eq!((applied.a_p, applied.a_c), (c.a_p, c.a_c));
    }
}
