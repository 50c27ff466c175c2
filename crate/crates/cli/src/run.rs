//! Running an experiment and writing its artifacts.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crcap_core::montecarlo::{run_experiment, ExperimentConfig};
use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;

use crate::config::ConfigDocument;
use crate::error::{CliError, Result};

/// Record written next to the CSVs of every run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ConfigDocument,
    pub version: String,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub master_seed: u64,
    pub elapsed_seconds: f64,
    pub threads: usize,
    pub calibrations: Vec<CalibrationRecord>,
    pub tables: Vec<TableRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRecord {
    /// Sweep point the constants belong to.
    pub point: String,
    #[serde(rename = "A_p")]
    pub a_p: f64,
    #[serde(rename = "A_c")]
    pub a_c: f64,
    pub quantile: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRecord {
    pub file: String,
    pub rows: usize,
    pub metadata: std::collections::BTreeMap<String, String>,
}

/// Paths written by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub csv_files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

pub fn manifest_file_name(config: &ExperimentConfig) -> String {
    format!("{}.manifest.json", config.experiment.id())
}

/// Runs the configured experiment and writes one CSV per result table plus
/// the manifest into `config.output`.
///
/// Nothing is written unless the experiment succeeds; files are staged in the
/// output directory and renamed into place at the end.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let start = Instant::now();
    let output = run_experiment(config)?;
    let elapsed = start.elapsed().as_secs_f64();

    let dir = &config.output;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;

    let mut staged = Vec::new();
    let mut tables = Vec::new();
    for table in &output.tables {
        let file = format!("{}.csv", table.name);
        staged.push((stage(dir, table.to_csv().as_bytes())?, dir.join(&file)));
        tables.push(TableRecord {
            file,
            rows: table.rows.len(),
            metadata: table.metadata.clone(),
        });
    }
    let manifest = RunManifest {
        config: ConfigDocument::from(config),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        master_seed: config.seed,
        elapsed_seconds: elapsed,
        threads: rayon::current_num_threads(),
        calibrations: output
            .calibrations
            .iter()
            .map(|(point, c)| CalibrationRecord {
                point: point.clone(),
                a_p: c.a_p,
                a_c: c.a_c,
                quantile: c.quantile,
                samples: c.samples,
            })
            .collect(),
        tables,
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    let manifest_path = dir.join(manifest_file_name(config));
    staged.push((stage(dir, json.as_bytes())?, manifest_path.clone()));

    let mut written = Vec::new();
    for (tmp, target) in staged {
        if let Err(e) = tmp.persist(&target) {
            for path in &written {
                let _ = std::fs::remove_file(path);
            }
            return Err(CliError::io(target, e.error));
        }
        written.push(target);
    }
    written.pop();
    Ok(RunReport {
        csv_files: written,
        manifest: manifest_path,
    })
}

fn stage(dir: &Path, bytes: &[u8]) -> Result<NamedTempFile> {
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes)
        .map_err(|e| CliError::io(tmp.path(), e))?;
    Ok(tmp)
}
