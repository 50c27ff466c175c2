use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use crcap_core::montecarlo::{ExperimentConfig, ExperimentKind};

use crate::config::{read_config_file, ConfigDocument};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "crcap",
    version,
    about = "Capacity statistics of a cognitive radio sharing spectrum with a primary link"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability of the low-interference regime over a σ × γ grid.
    LowInterference(RunArgs),
    /// Histograms of log10 of the exact and approximate power loss.
    AlphaPdf(RunArgs),
    /// CR-rate CDFs with the exact and approximate power loss.
    RateCdf(RunArgs),
    /// Mean power loss against R_c/R_p.
    MeanAlpha(RunArgs),
    /// Per-drop power-loss CDFs against the analytic law.
    AlphaCdfDrops(RunArgs),
    /// Mean percentage CR-rate loss.
    RateLoss(RunArgs),
    /// Mean CR rate against a CR transmit power multiplier.
    PowerSweep(RunArgs),
    /// Gain-constant calibration and its achieved coverage.
    Calibrate(RunArgs),
}

impl Command {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Command::LowInterference(_) => ExperimentKind::LowInterference,
            Command::AlphaPdf(_) => ExperimentKind::AlphaPdf,
            Command::RateCdf(_) => ExperimentKind::RateCdf,
            Command::MeanAlpha(_) => ExperimentKind::MeanAlpha,
            Command::AlphaCdfDrops(_) => ExperimentKind::AlphaCdfDrops,
            Command::RateLoss(_) => ExperimentKind::RateLoss,
            Command::PowerSweep(_) => ExperimentKind::PowerSweep,
            Command::Calibrate(_) => ExperimentKind::Calibrate,
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::LowInterference(a)
            | Command::AlphaPdf(a)
            | Command::RateCdf(a)
            | Command::MeanAlpha(a)
            | Command::AlphaCdfDrops(a)
            | Command::RateLoss(a)
            | Command::PowerSweep(a)
            | Command::Calibrate(a) => a,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// JSON configuration document or a previous run manifest.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trials per sweep point (fading draws per drop for alpha-cdf-drops).
    #[arg(long)]
    pub samples: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to one per core.
    #[arg(long, env = "CRCAP_THREADS")]
    pub threads: Option<usize>,
}

impl RunArgs {
    /// Configuration for `kind`: the document (or defaults), then flags.
    pub fn resolve(&self, kind: ExperimentKind) -> Result<ExperimentConfig> {
        let mut doc = match &self.config {
            Some(path) => read_config_file(path)?,
            None => ConfigDocument::from(&ExperimentConfig::new(kind)),
        };
        if let Some(seed) = self.seed {
            doc.seed = Some(seed);
        }
        if let Some(n) = self.samples {
            match kind {
                ExperimentKind::AlphaCdfDrops => doc.samples.n_fading = n,
                _ => doc.samples.n = n,
            }
        }
        if let Some(out) = &self.out {
            doc.output = Some(out.clone());
        }
        doc.resolve(Some(kind))
    }

    /// Sizes the global worker pool. Call once, before any sampling.
    pub fn install_threads(&self) -> Result<()> {
        let Some(n) = self.threads else { return Ok(()) };
        if n == 0 {
            return Err(CliError::Config("threads: must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("threads: {e}")))
    }
}
