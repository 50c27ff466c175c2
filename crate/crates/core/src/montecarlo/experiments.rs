//! Experiment drivers. Each returns one or more [`ResultTable`]s whose rows
//! follow the sweep order of the configuration.

use crate::analytic::{alpha_hat_cdf, alpha_hat_pdf, prob_low_interference, AlphaApproxLaw};
use crate::channel::{
    calibrate, cr_rate_unchecked, interference_coefficient, sample_channel_unchecked, Calibration,
    ChannelSample, FadingSample, CALIBRATION_SNR_DB,
};
use crate::error::{Error, Result};
use crate::geometry::{make_drop_unchecked, sample_annulus_radius, Drop, SystemParams};
use crate::numerics::{ks_distance, ks_two_sample, EmpiricalCdf, RandomStream};

use super::config::{ExperimentConfig, ExperimentKind, SweepParam, SweepPoint};
use super::engine::{
    map_chunks, map_trials, Moments, Proportion, AVERAGING_DROP_STREAM, CALIBRATION_CHECK_STREAMS,
    CALIBRATION_STREAM, FIXED_DROP_STREAM, FIXED_FADING_STREAMS, INDEPENDENT_STREAMS,
};
use super::table::ResultTable;

/// Fewest conditioned samples accepted at any sweep point.
pub const MIN_ACCEPTED: u64 = 100;
/// Equal-width bins of the log₁₀ α histograms.
pub const HISTOGRAM_BINS: usize = 60;
/// Points on the log₁₀ x grid of the per-drop CDF curves.
pub const DROP_CDF_GRID: usize = 100;
/// Points on the rate grid of the CR-rate CDF curves.
pub const RATE_CDF_GRID: usize = 200;

/// Every table an experiment produced, plus the calibrations it used.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub tables: Vec<ResultTable>,
    pub calibrations: Vec<(String, Calibration)>,
}

/// Runs the experiment named by `config.experiment`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let calibrations = match config.experiment {
        ExperimentKind::LowInterference => Vec::new(),
        _ => config
            .points()?
            .iter()
            .map(|p| Ok((p.label(), calibrate_point(config, p)?.1)))
            .collect::<Result<Vec<_>>>()?,
    };
    let tables = match config.experiment {
        ExperimentKind::LowInterference => vec![estimate_low_interference(config)?],
        ExperimentKind::AlphaPdf => vec![alpha_statistics(config)?.histogram],
        ExperimentKind::MeanAlpha => vec![alpha_statistics(config)?.means],
        ExperimentKind::RateCdf => {
            let r = rate_distribution(config)?;
            vec![r.cdf, r.summary]
        }
        ExperimentKind::AlphaCdfDrops => {
            let r = alpha_cdf_per_drop(config)?;
            vec![r.curves, r.summary]
        }
        ExperimentKind::RateLoss => vec![mean_rate_loss(config)?],
        ExperimentKind::PowerSweep => vec![power_sweep(config)?],
        ExperimentKind::Calibrate => vec![calibration_table(config)?],
    };
    Ok(ExperimentOutput {
        tables,
        calibrations,
    })
}

/// Calibrated parameters for a sweep point, with `P_c` scaled by `β_pw`.
pub fn calibrate_point(
    config: &ExperimentConfig,
    point: &SweepPoint,
) -> Result<(SystemParams, Calibration)> {
    let mut stream = RandomStream::new(config.seed, CALIBRATION_STREAM);
    let calibration = calibrate(
        &point.params,
        config.samples.calibration as usize,
        &mut stream,
    )?;
    let mut params = calibration.apply(&point.params);
    params.p_c *= point.beta_pw;
    Ok((params, calibration))
}

fn coord_names(config: &ExperimentConfig) -> Vec<String> {
    config
        .sweep
        .iter()
        .map(|a| a.param.name().to_string())
        .collect()
}

fn coord_values(point: &SweepPoint) -> Vec<f64> {
    point.coords.iter().map(|&(_, v)| v).collect()
}

fn with_coords(point: &SweepPoint, rest: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut row = coord_values(point);
    row.extend(rest);
    row
}

fn columns(config: &ExperimentConfig, rest: &[&str]) -> Vec<String> {
    let mut cols = coord_names(config);
    cols.extend(rest.iter().map(|s| s.to_string()));
    cols
}

fn stamp(table: &mut ResultTable, config: &ExperimentConfig) {
    table.set_meta("experiment", config.experiment.id());
    table.set_meta("seed", config.seed);
    table.set_meta("samples.n", config.samples.n);
}

fn require(accepted: u64, point: &SweepPoint, what: &str) -> Result<()> {
    if accepted < MIN_ACCEPTED {
        return Err(Error::InsufficientSamples {
            context: format!("{} ({what})", point.label()),
            accepted,
            required: MIN_ACCEPTED,
        });
    }
    Ok(())
}

fn accepted_alpha(ch: &ChannelSample) -> f64 {
    assert!(
        ch.a < 1.0,
        "conditioned statistic received a sample with a >= 1"
    );
    ch.alpha
        .expect("alpha is populated in the low-interference regime")
}

/// Fraction of exact-geometry trials in the low-interference regime.
pub fn low_interference_fraction(params: &SystemParams, seed: u64, n: u64) -> Proportion {
    map_trials(params, seed, n, Proportion::default, |acc, drop, fading| {
        acc.record(interference_coefficient(drop, fading, params) < 1.0)
    })
    .iter()
    .fold(Proportion::default(), |mut a, b| {
        a.merge(b);
        a
    })
}

/// Same fraction when `r_cc` and `r_cp` are drawn independently from their
/// area-uniform annulus laws, the model behind the closed-form probability.
pub fn independent_ratio_fraction(params: &SystemParams, seed: u64, n: u64) -> Proportion {
    let sigma = params.sigma_sf();
    let noise = (params.n_c / params.n_p).sqrt();
    map_chunks(seed, INDEPENDENT_STREAMS, n, |stream, count| {
        let mut acc = Proportion::default();
        for _ in 0..count {
            let r_cc = sample_annulus_radius(params.r_0, params.r_c, stream);
            let r_cp = sample_annulus_radius(params.r_0, params.r_p, stream);
            let x_cc = sigma * stream.std_normal();
            let x_cp = sigma * stream.std_normal();
            let f = stream.unit_exponential();
            let c = stream.unit_exponential();
            let a = noise
                * (0.5 * (x_cp - x_cc)).exp()
                * (r_cp / r_cc).powf(-0.5 * params.gamma)
                * (f / c).sqrt();
            acc.record(a < 1.0);
        }
        acc
    })
    .iter()
    .fold(Proportion::default(), |mut a, b| {
        a.merge(b);
        a
    })
}

/// Monte Carlo and analytic probability of the low-interference regime.
///
/// Columns: `sigma_db, gamma`, any other swept parameters, then
/// `p_analytic, p_mc, stderr`. The Monte Carlo estimate uses the exact
/// geometry; gain constants cancel out of `a`, so no calibration is run.
pub fn estimate_low_interference(config: &ExperimentConfig) -> Result<ResultTable> {
    let extra: Vec<SweepParam> = config
        .sweep
        .iter()
        .map(|a| a.param)
        .filter(|p| !matches!(p, SweepParam::SigmaDb | SweepParam::Gamma))
        .collect();
    let mut cols = vec!["sigma_db".to_string(), "gamma".to_string()];
    cols.extend(extra.iter().map(|p| p.name().to_string()));
    cols.extend(["p_analytic", "p_mc", "stderr"].map(String::from));
    let mut table = ResultTable::new(config.experiment.id(), cols);
    for point in config.points()? {
        let params = point.params;
        let analytic = prob_low_interference(&params)?;
        let mc = low_interference_fraction(&params, config.seed, config.samples.n);
        let mut row = vec![params.sigma_db, params.gamma];
        for p in &extra {
            row.push(
                point
                    .coords
                    .iter()
                    .find(|(q, _)| q == p)
                    .map(|&(_, v)| v)
                    .unwrap_or(f64::NAN),
            );
        }
        row.extend([analytic, mc.estimate(), mc.stderr()]);
        table.push_row(row);
    }
    stamp(&mut table, config);
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaStatistics {
    /// Density-normalized histograms of log₁₀ α and log₁₀ α̂.
    pub histogram: ResultTable,
    /// `E[α | a<1]` and `E[α̂ | a<1]` per sweep point.
    pub means: ResultTable,
}

#[derive(Default)]
struct AlphaAcc {
    alpha: Moments,
    alpha_hat: Moments,
    log_alpha: Vec<f64>,
    log_alpha_hat: Vec<f64>,
}

/// Statistics of α conditioned on `a < 1`, and of α̂ (α_approx further
/// restricted to values below 1).
pub fn alpha_statistics(config: &ExperimentConfig) -> Result<AlphaStatistics> {
    let mut histogram = ResultTable::new(
        "alpha_pdf",
        columns(
            config,
            &[
                "bin_center",
                "bin_lo",
                "bin_hi",
                "pdf_alpha",
                "pdf_alpha_hat",
                "pdf_alpha_hat_analytic",
                "count_alpha",
                "count_alpha_hat",
            ],
        ),
    );
    let mut means = ResultTable::new(
        "mean_alpha",
        columns(
            config,
            &[
                "mean_alpha",
                "stderr_alpha",
                "mean_alpha_hat",
                "stderr_alpha_hat",
                "accepted",
                "accepted_hat",
                "n",
            ],
        ),
    );
    for point in config.points()? {
        let (params, _) = calibrate_point(config, &point)?;
        let chunks = map_trials(
            &params,
            config.seed,
            config.samples.n,
            AlphaAcc::default,
            |acc, drop, fading| {
                let ch = sample_channel_unchecked(drop, fading, &params);
                if !ch.low_interference {
                    return;
                }
                let alpha = accepted_alpha(&ch);
                acc.alpha.push(alpha);
                acc.log_alpha.push(alpha.log10());
                let approx = ch.alpha_approx.expect("populated with alpha");
                if approx < 1.0 {
                    acc.alpha_hat.push(approx);
                    acc.log_alpha_hat.push(approx.log10());
                }
            },
        );
        let mut total = AlphaAcc::default();
        for c in chunks {
            total.alpha.merge(&c.alpha);
            total.alpha_hat.merge(&c.alpha_hat);
            total.log_alpha.extend(c.log_alpha);
            total.log_alpha_hat.extend(c.log_alpha_hat);
        }
        require(total.alpha.count, &point, "alpha")?;
        require(total.alpha_hat.count, &point, "alpha_hat")?;
        means.push_row(with_coords(
            &point,
            [
                total.alpha.mean,
                total.alpha.stderr(),
                total.alpha_hat.mean,
                total.alpha_hat.stderr(),
                total.alpha.count as f64,
                total.alpha_hat.count as f64,
                config.samples.n as f64,
            ],
        ));

        let (lo, hi) = total
            .log_alpha
            .iter()
            .chain(&total.log_alpha_hat)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        let (lo, hi) = if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, lo + 0.5)
        };
        let width = (hi - lo) / HISTOGRAM_BINS as f64;
        let bin_counts = |xs: &[f64]| {
            let mut counts = vec![0u64; HISTOGRAM_BINS];
            for &x in xs {
                let i = (((x - lo) / width) as usize).min(HISTOGRAM_BINS - 1);
                counts[i] += 1;
            }
            counts
        };
        let counts_alpha = bin_counts(&total.log_alpha);
        let counts_hat = bin_counts(&total.log_alpha_hat);
        let centers: Vec<f64> = (0..HISTOGRAM_BINS)
            .map(|i| lo + (i as f64 + 0.5) * width)
            .collect();
        let analytic = drop_averaged_log_alpha_hat_pdf(config, &params, &centers)?;
        let n_alpha = total.alpha.count as f64;
        let n_hat = total.alpha_hat.count as f64;
        for i in 0..HISTOGRAM_BINS {
            histogram.push_row(with_coords(
                &point,
                [
                    centers[i],
                    lo + i as f64 * width,
                    lo + (i + 1) as f64 * width,
                    counts_alpha[i] as f64 / (n_alpha * width),
                    counts_hat[i] as f64 / (n_hat * width),
                    analytic[i],
                    counts_alpha[i] as f64,
                    counts_hat[i] as f64,
                ],
            ));
        }
    }
    stamp(&mut histogram, config);
    histogram.set_meta("bins", HISTOGRAM_BINS);
    histogram.set_meta("samples.averaging_drops", config.samples.averaging_drops);
    stamp(&mut means, config);
    Ok(AlphaStatistics { histogram, means })
}

/// Density of log₁₀ α̂ averaged with equal weight over independent drops.
fn drop_averaged_log_alpha_hat_pdf(
    config: &ExperimentConfig,
    params: &SystemParams,
    at: &[f64],
) -> Result<Vec<f64>> {
    let mut stream = RandomStream::new(config.seed, AVERAGING_DROP_STREAM);
    let drops = config.samples.averaging_drops;
    let mut sum = vec![0.0; at.len()];
    for _ in 0..drops {
        let drop = make_drop_unchecked(params, &mut stream);
        let law = AlphaApproxLaw::from_drop(&drop, params)?;
        for (s, &l) in sum.iter_mut().zip(at) {
            if l < 0.0 {
                let x = 10f64.powf(l);
                *s += alpha_hat_pdf(x, &law)? * x * std::f64::consts::LN_10;
            }
        }
    }
    Ok(sum.into_iter().map(|s| s / drops as f64).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerDropCdfs {
    /// Analytic α̂ CDF and empirical CDFs on a log₁₀ x grid, per drop.
    pub curves: ResultTable,
    /// Link gains, mean SNRs and KS distances per drop.
    pub summary: ResultTable,
}

/// Per-drop CDFs of the power loss with the link gains held fixed.
///
/// For each of the first `n_drops` drops, `n_fading` Rayleigh draws give
/// two empirical CDFs: exact α conditioned on `a < 1`, and α_approx under
/// unconditional exponentials restricted to `α_approx < 1`. The latter is
/// exactly the law of the analytic α̂ CDF.
pub fn alpha_cdf_per_drop(config: &ExperimentConfig) -> Result<PerDropCdfs> {
    let mut curves = ResultTable::new(
        "alpha_cdf_drops",
        columns(
            config,
            &[
                "drop",
                "log10_x",
                "cdf_analytic",
                "ecdf_alpha",
                "ecdf_alpha_approx",
            ],
        ),
    );
    let mut summary = ResultTable::new(
        "alpha_cdf_drops_summary",
        columns(
            config,
            &[
                "drop",
                "gain_pp",
                "gain_cp",
                "gain_cc",
                "mu_s",
                "mu_t",
                "accepted_alpha",
                "accepted_alpha_approx",
                "ks_alpha",
                "ks_alpha_approx",
            ],
        ),
    );
    for point in config.points()? {
        let (params, _) = calibrate_point(config, &point)?;
        let mut drop_stream = RandomStream::new(config.seed, FIXED_DROP_STREAM);
        for d in 0..config.samples.n_drops {
            let drop = make_drop_unchecked(&params, &mut drop_stream);
            let law = AlphaApproxLaw::from_drop(&drop, &params)?;
            let (exact, approx) =
                fixed_drop_alpha_samples(&drop, &params, config.seed, d, config.samples.n_fading);
            let label = format!("drop {d}");
            require(exact.len() as u64, &point, &format!("{label}, alpha"))?;
            require(
                approx.len() as u64,
                &point,
                &format!("{label}, alpha_approx"),
            )?;
            let exact = EmpiricalCdf::new(exact)?;
            let approx = EmpiricalCdf::new(approx)?;
            let cdf = |x: f64| alpha_hat_cdf(x.clamp(0.0, 1.0), &law).unwrap_or(f64::NAN);
            let ks_exact = ks_distance(&exact, cdf)?;
            let ks_approx = ks_distance(&approx, cdf)?;
            summary.push_row(with_coords(
                &point,
                [
                    d as f64,
                    drop.gain_pp,
                    drop.gain_cp,
                    drop.gain_cc,
                    law.mu_s,
                    law.mu_t,
                    exact.len() as f64,
                    approx.len() as f64,
                    ks_exact,
                    ks_approx,
                ],
            ));

            let lo = exact.samples()[0].min(approx.samples()[0]).log10().floor();
            let hi = 0.0_f64.max(lo + 1.0);
            for i in 0..DROP_CDF_GRID {
                let l = lo + (hi - lo) * i as f64 / (DROP_CDF_GRID - 1) as f64;
                let x = 10f64.powf(l);
                curves.push_row(with_coords(
                    &point,
                    [d as f64, l, cdf(x), exact.eval(x), approx.eval(x)],
                ));
            }
        }
    }
    stamp(&mut curves, config);
    curves.set_meta("samples.n_drops", config.samples.n_drops);
    curves.set_meta("samples.n_fading", config.samples.n_fading);
    stamp(&mut summary, config);
    summary.set_meta("samples.n_drops", config.samples.n_drops);
    summary.set_meta("samples.n_fading", config.samples.n_fading);
    Ok(PerDropCdfs { curves, summary })
}

/// Fading draws on one fixed drop: exact α for draws with `a < 1`, and
/// α_approx for draws with `α_approx < 1` (no conditioning on `a`).
pub fn fixed_drop_alpha_samples(
    drop: &Drop,
    params: &SystemParams,
    seed: u64,
    drop_index: u64,
    n_fading: u64,
) -> (Vec<f64>, Vec<f64>) {
    let base = FIXED_FADING_STREAMS + (drop_index << 24);
    let chunks = map_chunks(seed, base, n_fading, |stream, count| {
        let mut exact = Vec::new();
        let mut approx = Vec::new();
        for _ in 0..count {
            let fading = FadingSample::draw(stream);
            let ch = sample_channel_unchecked(drop, &fading, params);
            if ch.low_interference {
                exact.push(accepted_alpha(&ch));
            }
            let a = 0.25 * ch.s_sq * ch.t_sq;
            if a < 1.0 {
                approx.push(a);
            }
        }
        (exact, approx)
    });
    let mut exact = Vec::new();
    let mut approx = Vec::new();
    for (e, a) in chunks {
        exact.extend(e);
        approx.extend(a);
    }
    (exact, approx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateDistribution {
    /// Empirical CDFs of the CR rate with exact α and with α̂, on a grid.
    pub cdf: ResultTable,
    pub summary: ResultTable,
}

#[derive(Default)]
struct RateAcc {
    rate: Moments,
    rate_hat: Moments,
    rates: Vec<f64>,
    rates_hat: Vec<f64>,
}

/// CR-rate distribution conditioned on `a < 1`, with exact α and with α̂ on
/// common random numbers. Samples with `α_approx >= 1` have no α̂ and are
/// left out of the α̂ arm.
pub fn rate_distribution(config: &ExperimentConfig) -> Result<RateDistribution> {
    let mut cdf = ResultTable::new(
        "rate_cdf",
        columns(config, &["rate", "cdf_exact", "cdf_hat"]),
    );
    let mut summary = ResultTable::new(
        "rate_cdf_summary",
        columns(
            config,
            &[
                "mean_rate",
                "stderr_rate",
                "mean_rate_hat",
                "stderr_rate_hat",
                "sup_distance",
                "accepted",
                "accepted_hat",
                "n",
            ],
        ),
    );
    for point in config.points()? {
        let (params, _) = calibrate_point(config, &point)?;
        let chunks = map_trials(
            &params,
            config.seed,
            config.samples.n,
            RateAcc::default,
            |acc, drop, fading| {
                let ch = sample_channel_unchecked(drop, fading, &params);
                if !ch.low_interference {
                    return;
                }
                let alpha = accepted_alpha(&ch);
                let snr_cc = drop.gain_cc * fading.c_sq * params.p_c / params.n_c;
                let rate = cr_rate_unchecked(snr_cc, alpha);
                acc.rate.push(rate);
                acc.rates.push(rate);
                let approx = ch.alpha_approx.expect("populated with alpha");
                if approx < 1.0 {
                    let rate_hat = cr_rate_unchecked(snr_cc, approx);
                    debug_assert!(rate >= rate_hat, "exact-α rate below α̂ rate");
                    acc.rate_hat.push(rate_hat);
                    acc.rates_hat.push(rate_hat);
                }
            },
        );
        let mut total = RateAcc::default();
        for c in chunks {
            total.rate.merge(&c.rate);
            total.rate_hat.merge(&c.rate_hat);
            total.rates.extend(c.rates);
            total.rates_hat.extend(c.rates_hat);
        }
        require(total.rate.count, &point, "rate")?;
        require(total.rate_hat.count, &point, "rate_hat")?;
        let exact = EmpiricalCdf::new(total.rates)?;
        let hat = EmpiricalCdf::new(total.rates_hat)?;
        summary.push_row(with_coords(
            &point,
            [
                total.rate.mean,
                total.rate.stderr(),
                total.rate_hat.mean,
                total.rate_hat.stderr(),
                ks_two_sample(&exact, &hat),
                total.rate.count as f64,
                total.rate_hat.count as f64,
                config.samples.n as f64,
            ],
        ));
        let top = exact.samples()[exact.len() - 1].max(hat.samples()[hat.len() - 1]);
        for i in 0..RATE_CDF_GRID {
            let r = top * i as f64 / (RATE_CDF_GRID - 1) as f64;
            cdf.push_row(with_coords(&point, [r, exact.eval(r), hat.eval(r)]));
        }
    }
    stamp(&mut cdf, config);
    stamp(&mut summary, config);
    Ok(RateDistribution { cdf, summary })
}

/// Mean percentage CR-rate loss `[R(α=0) − R(α)]/R(α=0)·100` over trials
/// with `a < 1`; both terms use the same fading draw.
pub fn mean_rate_loss(config: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = ResultTable::new(
        config.experiment.id(),
        columns(config, &["mean_loss_pct", "stderr", "accepted", "n"]),
    );
    for point in config.points()? {
        let (params, _) = calibrate_point(config, &point)?;
        let loss = map_trials(
            &params,
            config.seed,
            config.samples.n,
            Moments::default,
            |acc, drop, fading| {
                let ch = sample_channel_unchecked(drop, fading, &params);
                if !ch.low_interference {
                    return;
                }
                let alpha = accepted_alpha(&ch);
                let snr_cc = drop.gain_cc * fading.c_sq * params.p_c / params.n_c;
                let full = cr_rate_unchecked(snr_cc, 0.0);
                let kept = cr_rate_unchecked(snr_cc, alpha);
                acc.push((full - kept) / full * 100.0);
            },
        )
        .iter()
        .fold(Moments::default(), |mut a, b| {
            a.merge(b);
            a
        });
        require(loss.count, &point, "rate loss")?;
        table.push_row(with_coords(
            &point,
            [
                loss.mean,
                loss.stderr(),
                loss.count as f64,
                config.samples.n as f64,
            ],
        ));
    }
    stamp(&mut table, config);
    Ok(table)
}

/// Mean CR rate (conditioned on `a < 1`) per sweep point; with a `beta_pw`
/// axis every point reuses the same drops and fading draws.
pub fn power_sweep(config: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = ResultTable::new(
        config.experiment.id(),
        columns(
            config,
            &["mean_rate", "stderr", "accepted_fraction", "accepted", "n"],
        ),
    );
    for point in config.points()? {
        let (params, _) = calibrate_point(config, &point)?;
        let (rate, regime) = map_trials(
            &params,
            config.seed,
            config.samples.n,
            || (Moments::default(), Proportion::default()),
            |(rate, regime), drop, fading| {
                let ch = sample_channel_unchecked(drop, fading, &params);
                regime.record(ch.low_interference);
                if ch.low_interference {
                    accepted_alpha(&ch);
                    rate.push(ch.rate_cr.expect("populated with alpha"));
                }
            },
        )
        .iter()
        .fold(
            (Moments::default(), Proportion::default()),
            |(mut m, mut p), (m2, p2)| {
                m.merge(m2);
                p.merge(p2);
                (m, p)
            },
        );
        require(rate.count, &point, "rate")?;
        table.push_row(with_coords(
            &point,
            [
                rate.mean,
                rate.stderr(),
                regime.estimate(),
                rate.count as f64,
                config.samples.n as f64,
            ],
        ));
    }
    stamp(&mut table, config);
    Ok(table)
}

/// Fraction of fresh PP-link draws whose SNR reaches the calibration target.
pub fn calibration_coverage(params: &SystemParams, seed: u64, n: u64) -> Proportion {
    let target = 10f64.powf(CALIBRATION_SNR_DB / 10.0);
    let sigma = params.sigma_sf();
    map_chunks(seed, CALIBRATION_CHECK_STREAMS, n, |stream, count| {
        let mut acc = Proportion::default();
        for _ in 0..count {
            let r = sample_annulus_radius(params.r_0, params.r_p, stream);
            let x = sigma * stream.std_normal();
            let p = stream.unit_exponential();
            let snr = params.p_p * params.a_p * x.exp() * r.powf(-params.gamma) * p / params.n_p;
            acc.record(snr >= target);
        }
        acc
    })
    .iter()
    .fold(Proportion::default(), |mut a, b| {
        a.merge(b);
        a
    })
}

/// Calibrated constants per sweep point and their coverage on fresh draws.
pub fn calibration_table(config: &ExperimentConfig) -> Result<ResultTable> {
    let mut table = ResultTable::new(
        config.experiment.id(),
        columns(
            config,
            &["A_p", "A_c", "quantile", "coverage", "coverage_stderr"],
        ),
    );
    for point in config.points()? {
        let (params, cal) = calibrate_point(config, &point)?;
        let coverage = calibration_coverage(&params, config.seed, config.samples.n);
        table.push_row(with_coords(
            &point,
            [
                cal.a_p,
                cal.a_c,
                cal.quantile,
                coverage.estimate(),
                coverage.stderr(),
            ],
        ));
    }
    stamp(&mut table, config);
    table.set_meta("samples.calibration", config.samples.calibration);
    Ok(table)
}
