//! Command-line front end for the crcap experiments: configuration
//! documents, argument handling, and CSV/manifest output.

pub mod args;
pub mod config;
pub mod error;
pub mod run;

pub use config::{parse_config, serialize_config, ConfigDocument, ParamsDocument};
pub use error::{CliError, Result};
pub use run::{run, RunManifest, RunReport};
