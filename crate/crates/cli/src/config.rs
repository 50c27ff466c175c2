//! JSON configuration documents.
//!
//! A document names the experiment, overrides any subset of the model
//! parameters, and optionally gives a sweep, sample counts, a seed and an
//! output directory. Gain constants are never read from a document; they are
//! calibrated at run time. A run manifest is also accepted, in which case its
//! `config` member is used.

use std::path::{Path, PathBuf};

use crcap_core::montecarlo::{
    ExperimentConfig, ExperimentKind, SampleCounts, SweepAxis, DEFAULT_SEED,
};
use crcap_core::SystemParams;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

/// Output directory used when neither the document nor the command line names one.
pub const DEFAULT_OUTPUT: &str = "out";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    #[serde(default)]
    pub params: ParamsDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepAxis>>,
    #[serde(default)]
    pub samples: SampleCounts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// Model parameters as written in a document; omitted fields take defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsDocument {
    #[serde(rename = "R_0")]
    pub r_0: f64,
    #[serde(rename = "R_p")]
    pub r_p: f64,
    #[serde(rename = "R_c")]
    pub r_c: f64,
    pub gamma: f64,
    pub sigma_db: f64,
    #[serde(rename = "N_p")]
    pub n_p: f64,
    #[serde(rename = "N_c")]
    pub n_c: f64,
    #[serde(rename = "P_p")]
    pub p_p: f64,
    #[serde(rename = "P_c")]
    pub p_c: f64,
}

impl Default for ParamsDocument {
    fn default() -> Self {
        ParamsDocument::from(&SystemParams::default())
    }
}

impl From<&SystemParams> for ParamsDocument {
    fn from(p: &SystemParams) -> Self {
        Self {
            r_0: p.r_0,
            r_p: p.r_p,
            r_c: p.r_c,
            gamma: p.gamma,
            sigma_db: p.sigma_db,
            n_p: p.n_p,
            n_c: p.n_c,
            p_p: p.p_p,
            p_c: p.p_c,
        }
    }
}

impl ParamsDocument {
    fn to_params(self) -> SystemParams {
        SystemParams {
            r_0: self.r_0,
            r_p: self.r_p,
            r_c: self.r_c,
            gamma: self.gamma,
            sigma_db: self.sigma_db,
            n_p: self.n_p,
            n_c: self.n_c,
            p_p: self.p_p,
            p_c: self.p_c,
            ..SystemParams::default()
        }
    }
}

impl From<&ExperimentConfig> for ConfigDocument {
    fn from(c: &ExperimentConfig) -> Self {
        Self {
            experiment: Some(c.experiment),
            params: ParamsDocument::from(&c.params),
            sweep: Some(c.sweep.clone()),
            samples: c.samples,
            seed: Some(c.seed),
            output: Some(c.output.clone()),
        }
    }
}

impl ConfigDocument {
    /// Parses a configuration document or a run manifest.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut value: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("malformed JSON: {e}")))?;
        let is_manifest = value
            .as_object()
            .is_some_and(|o| o.contains_key("config") && o.contains_key("version"));
        if is_manifest {
            value = value["config"].take();
        }
        if let Some(params) = value.get("params").and_then(Value::as_object) {
            for key in ["A_p", "A_c"] {
                if params.contains_key(key) {
                    return Err(CliError::Config(format!(
                        "params.{key}: gain constants are calibrated at run time and cannot be set"
                    )));
                }
            }
        }
        serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config(format!("{path}: {}", e.into_inner()))
        })
    }

    /// Fills defaults and validates. `kind` is the experiment requested on the
    /// command line, if any; it must agree with the document.
    pub fn resolve(self, kind: Option<ExperimentKind>) -> Result<ExperimentConfig> {
        let experiment = match (self.experiment, kind) {
            (Some(doc), Some(cmd)) if doc != cmd => {
                return Err(CliError::Config(format!(
                    "experiment: document names `{doc}` but the command runs `{cmd}`"
                )))
            }
            (Some(k), _) | (None, Some(k)) => k,
            (None, None) => {
                return Err(CliError::Config("experiment: missing experiment id".into()))
            }
        };
        let config = ExperimentConfig {
            experiment,
            params: self.params.to_params(),
            sweep: self.sweep.unwrap_or_else(|| experiment.default_sweep()),
            samples: self.samples,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            output: self.output.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT)),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Parses and validates a complete document, which must name its experiment.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    ConfigDocument::from_json(text)?.resolve(None)
}

/// Fully explicit JSON form of a configuration; [`parse_config`] inverts it.
pub fn serialize_config(config: &ExperimentConfig) -> String {
    serde_json::to_string_pretty(&ConfigDocument::from(config)).expect("configuration serializes")
}

pub fn read_config_file(path: &Path) -> Result<ConfigDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    ConfigDocument::from_json(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}
