//! Monte Carlo experiment engines with reproducible parallel sampling.

mod config;
mod engine;
mod experiments;
mod table;

pub use config::{
    ExperimentConfig, ExperimentKind, SampleCounts, SweepAxis, SweepParam, SweepPoint, DEFAULT_SEED,
};
pub use engine::{
    map_chunks, map_trials, Moments, Proportion, AVERAGING_DROP_STREAM, CALIBRATION_CHECK_STREAMS,
    CALIBRATION_STREAM, CHUNK_SIZE, FIXED_DROP_STREAM, FIXED_FADING_STREAMS, INDEPENDENT_STREAMS,
    TRIAL_STREAMS,
};
pub use experiments::{
    alpha_cdf_per_drop, alpha_statistics, calibrate_point, calibration_coverage, calibration_table,
    estimate_low_interference, fixed_drop_alpha_samples, independent_ratio_fraction,
    low_interference_fraction, mean_rate_loss, power_sweep, rate_distribution, run_experiment,
    AlphaStatistics, ExperimentOutput, PerDropCdfs, RateDistribution, DROP_CDF_GRID,
    HISTOGRAM_BINS, MIN_ACCEPTED, RATE_CDF_GRID,
};
pub use table::{format_number, ResultTable};
