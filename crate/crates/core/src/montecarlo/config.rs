use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SystemParams;

/// Master seed used when a configuration does not name one.
pub const DEFAULT_SEED: u64 = 20_080_601;

/// The experiment families, one per result figure plus calibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Probability of the low-interference regime against σ and γ.
    LowInterference,
    /// Densities of log₁₀ α and log₁₀ α̂.
    AlphaPdf,
    /// CR-rate CDFs with exact α and with α̂.
    RateCdf,
    /// `E[α | a < 1]` against `R_c/R_p`.
    MeanAlpha,
    /// Per-drop CDFs of α against the analytic α̂ law.
    AlphaCdfDrops,
    /// Mean percentage CR-rate loss.
    RateLoss,
    /// Mean CR rate against the CR power inflation factor.
    PowerSweep,
    /// Calibrated gain constants and their achieved coverage.
    Calibrate,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::LowInterference,
        ExperimentKind::AlphaPdf,
        ExperimentKind::RateCdf,
        ExperimentKind::MeanAlpha,
        ExperimentKind::AlphaCdfDrops,
        ExperimentKind::RateLoss,
        ExperimentKind::PowerSweep,
        ExperimentKind::Calibrate,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            ExperimentKind::LowInterference => "low_interference",
            ExperimentKind::AlphaPdf => "alpha_pdf",
            ExperimentKind::RateCdf => "rate_cdf",
            ExperimentKind::MeanAlpha => "mean_alpha",
            ExperimentKind::AlphaCdfDrops => "alpha_cdf_drops",
            ExperimentKind::RateLoss => "rate_loss",
            ExperimentKind::PowerSweep => "power_sweep",
            ExperimentKind::Calibrate => "calibrate",
        }
    }

    /// Sweep used when the configuration does not give one.
    pub fn default_sweep(&self) -> Vec<SweepAxis> {
        match self {
            ExperimentKind::LowInterference => vec![
                SweepAxis::new(SweepParam::Gamma, vec![3.0, 3.5, 4.0]),
                SweepAxis::new(SweepParam::SigmaDb, vec![6.0, 8.0, 10.0, 12.0]),
            ],
            ExperimentKind::MeanAlpha => {
                vec![SweepAxis::new(
                    SweepParam::RcRatio,
                    vec![0.05, 0.1, 0.2, 0.3],
                )]
            }
            ExperimentKind::RateLoss => {
                vec![SweepAxis::new(SweepParam::Gamma, vec![3.0, 3.5, 4.0])]
            }
            ExperimentKind::PowerSweep => {
                vec![SweepAxis::new(
                    SweepParam::BetaPw,
                    vec![0.5, 1.0, 2.0, 4.0, 8.0],
                )]
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.replace('-', "_");
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.id() == normalized)
            .ok_or_else(|| Error::InvalidParameter {
                field: "experiment",
                reason: format!("unknown experiment id `{s}`"),
            })
    }
}

/// A parameter that an experiment can sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "sigma_db")]
    SigmaDb,
    #[serde(rename = "gamma")]
    Gamma,
    /// `R_c/R_p`; sets `R_c`.
    #[serde(rename = "rc_ratio")]
    RcRatio,
    /// CR transmit power inflation factor; scales `P_c` after calibration.
    #[serde(rename = "beta_pw")]
    BetaPw,
    #[serde(rename = "R_0")]
    R0,
    #[serde(rename = "R_p")]
    Rp,
    #[serde(rename = "R_c")]
    Rc,
    #[serde(rename = "N_p")]
    Np,
    #[serde(rename = "N_c")]
    Nc,
    #[serde(rename = "P_p")]
    Pp,
    #[serde(rename = "P_c")]
    Pc,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::SigmaDb => "sigma_db",
            SweepParam::Gamma => "gamma",
            SweepParam::RcRatio => "rc_ratio",
            SweepParam::BetaPw => "beta_pw",
            SweepParam::R0 => "R_0",
            SweepParam::Rp => "R_p",
            SweepParam::Rc => "R_c",
            SweepParam::Np => "N_p",
            SweepParam::Nc => "N_c",
            SweepParam::Pp => "P_p",
            SweepParam::Pc => "P_c",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn new(param: SweepParam, values: Vec<f64>) -> Self {
        Self { param, values }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleCounts {
    /// Drop + fading trials per sweep point.
    pub n: u64,
    /// Fixed drops in the per-drop experiment.
    pub n_drops: u64,
    /// Fading draws per fixed drop.
    pub n_fading: u64,
    /// Draws used to calibrate the gain constants.
    pub calibration: u64,
    /// Drops averaged into drop-averaged analytic curves.
    pub averaging_drops: u64,
}

impl Default for SampleCounts {
    fn default() -> Self {
        Self {
            n: 1_000_000,
            n_drops: 5,
            n_fading: 100_000,
            calibration: 1_000_000,
            averaging_drops: 2_000,
        }
    }
}

/// One point of a sweep: resolved parameters plus the swept coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub params: SystemParams,
    /// Multiplier applied to `P_c` after calibration.
    pub beta_pw: f64,
    pub coords: Vec<(SweepParam, f64)>,
}

impl SweepPoint {
    pub fn label(&self) -> String {
        if self.coords.is_empty() {
            return "defaults".into();
        }
        self.coords
            .iter()
            .map(|(p, v)| format!("{}={}", p.name(), v))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Base parameters; `A_p`/`A_c` are replaced by calibration.
    pub params: SystemParams,
    /// Axes of a Cartesian sweep, first axis outermost.
    pub sweep: Vec<SweepAxis>,
    pub samples: SampleCounts,
    pub seed: u64,
    pub output: PathBuf,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            params: SystemParams::default(),
            sweep: experiment.default_sweep(),
            samples: SampleCounts::default(),
            seed: DEFAULT_SEED,
            output: PathBuf::from("out"),
        }
    }

    /// Expands the sweep into points, in row order.
    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        let mut points = vec![SweepPoint {
            params: self.params,
            beta_pw: 1.0,
            coords: Vec::new(),
        }];
        for axis in &self.sweep {
            if axis.values.is_empty() {
                return Err(Error::InvalidParameter {
                    field: "sweep",
                    reason: format!("axis `{}` has no values", axis.param.name()),
                });
            }
            let mut next = Vec::with_capacity(points.len() * axis.values.len());
            for point in &points {
                for &value in &axis.values {
                    let mut p = point.clone();
                    apply(&mut p, axis.param, value)?;
                    p.coords.push((axis.param, value));
                    next.push(p);
                }
            }
            points = next;
        }
        for p in &points {
            p.params.validate()?;
        }
        Ok(points)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let s = &self.samples;
        let positive = [
            ("samples.n", s.n),
            ("samples.n_drops", s.n_drops),
            ("samples.n_fading", s.n_fading),
            ("samples.averaging_drops", s.averaging_drops),
        ];
        for (field, v) in positive {
            if v == 0 {
                return Err(Error::InvalidParameter {
                    field,
                    reason: "must be at least 1".into(),
                });
            }
        }
        if s.calibration < crate::channel::MIN_CALIBRATION_SAMPLES as u64 {
            return Err(Error::InvalidParameter {
                field: "samples.calibration",
                reason: format!(
                    "must be at least {}, got {}",
                    crate::channel::MIN_CALIBRATION_SAMPLES,
                    s.calibration
                ),
            });
        }
        self.points().map(|_| ())
    }
}

fn apply(point: &mut SweepPoint, param: SweepParam, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidParameter {
            field: "sweep",
            reason: format!(
                "`{}` values must be finite and positive, got {value}",
                param.name()
            ),
        });
    }
    let p = &mut point.params;
    match param {
        SweepParam::SigmaDb => p.sigma_db = value,
        SweepParam::Gamma => p.gamma = value,
        SweepParam::RcRatio => p.r_c = value * p.r_p,
        SweepParam::BetaPw => point.beta_pw = value,
        SweepParam::R0 => p.r_0 = value,
        SweepParam::Rp => p.r_p = value,
        SweepParam::Rc => p.r_c = value,
        SweepParam::Np => p.n_p = value,
        SweepParam::Nc => p.n_c = value,
        SweepParam::Pp => p.p_p = value,
        SweepParam::Pc => p.p_c = value,
    }
    Ok(())
}
