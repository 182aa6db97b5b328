//! Command-line front end for `edgemodes`: configuration, scenario dispatch
//! and the CSV/JSON result files consumed by the plotting tools.

pub mod config;
pub mod run;
pub mod schema;

use serde::Serialize;

pub use config::{ConfigFile, RunConfig, Scenario};
pub use run::run;
pub use schema::{read_csv, read_meta, Meta, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Sim(#[from] edgemodes::error::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Machine-readable failure record printed on stderr.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn record(&self) -> ErrorRecord {
        let (kind, exit_code) = match self {
            CliError::Config(_) => ("config", 2),
            CliError::Schema(_) => ("schema", 3),
            CliError::Sim(_) => ("simulation", 1),
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => ("io", 4),
        };
        ErrorRecord { kind, message: self.to_string(), exit_code }
    }
}
