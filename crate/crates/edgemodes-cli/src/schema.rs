//! On-disk result format read by the plotting tools.
//!
//! A CSV file is two comment lines, a header and numeric rows:
//!
//! ```text
//! # schema_version=1.0.0 table=spectrum
//! # units=,,rad,
//! L,g,omega,nu
//! 12,0.80000000000000004,0,1.2345678901234567e-2
//! ```
//!
//! `meta.json` holds the schema version, seed, a SHA-256 hash of the resolved
//! configuration, a timestamp, the configuration itself and scenario summaries.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use edgemodes::experiments::Table;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ConfigFile;
use crate::CliError;

pub const SCHEMA_VERSION: &str = "1.0.0";
const SCHEMA_MAJOR: u64 = 1;

/// Rejects any version whose major component differs from ours.
pub fn check_version(v: &str) -> Result<(), CliError> {
    let major = v.split('.').next().and_then(|m| m.parse::<u64>().ok());
    match major {
        Some(SCHEMA_MAJOR) => Ok(()),
        _ => Err(CliError::Schema(format!("unsupported schema version `{v}` (reader supports {SCHEMA_MAJOR}.x)"))),
    }
}

/// Integers verbatim, other values with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_csv(path: &Path, table: &Table) -> Result<(), CliError> {
    if let Some(u) = table.units.iter().find(|u| u.contains(',')) {
        return Err(CliError::Schema(format!("unit `{u}` contains a comma")));
    }
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "# schema_version={SCHEMA_VERSION} table={}", table.name)?;
    writeln!(f, "# units={}", table.units.join(","))?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&x| format_f64(x)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Table, CliError> {
    let mut lines = BufReader::new(std::fs::File::open(path)?).lines();
    let mut next = |what: &str| -> Result<String, CliError> {
        lines.next().transpose()?.ok_or_else(|| CliError::Schema(format!("{}: missing {what} line", path.display())))
    };
    let first = next("schema")?;
    let mut version = None;
    let mut name = String::new();
    for kv in first.trim_start_matches('#').split_whitespace() {
        match kv.split_once('=') {
            Some(("schema_version", v)) => version = Some(v.to_string()),
            Some(("table", v)) => name = v.to_string(),
            _ => {}
        }
    }
    check_version(&version.ok_or_else(|| CliError::Schema(format!("{}: no schema_version", path.display())))?)?;
    let units_line = next("units")?;
    let units: Vec<String> = units_line
        .strip_prefix("# units=")
        .ok_or_else(|| CliError::Schema(format!("{}: malformed units line", path.display())))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if units.len() != columns.len() {
        return Err(CliError::Schema(format!("{}: {} units for {} columns", path.display(), units.len(), columns.len())));
    }
    let mut table = Table { name, columns, units, rows: vec![] };
    for rec in r.records() {
        let row = rec?
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| CliError::Schema(format!("{}: `{s}`: {e}", path.display()))))
            .collect::<Result<Vec<_>, _>>()?;
        table.push(row)?;
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub schema_version: String,
    pub scenario: String,
    pub seed: u64,
    /// Hex SHA-256 of the resolved physics configuration (without `out` and `threads`) as compact JSON.
    pub params_hash: String,
    /// Seconds since the Unix epoch at completion.
    pub created_unix: u64,
    pub config: ConfigFile,
    /// CSV files written by the run, relative to the output directory.
    pub files: Vec<String>,
    /// Reduced-scale substitutions relative to the device experiment.
    pub notes: Vec<String>,
    pub results: serde_json::Value,
}

pub fn params_hash(config: &ConfigFile) -> String {
    let physics = ConfigFile { out: None, threads: None, ..config.clone() };
    let bytes = serde_json::to_vec(&physics).expect("config serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_meta(path: &Path, meta: &Meta) -> Result<(), CliError> {
    std::fs::write(path, serde_json::to_string_pretty(meta)? + "\n")?;
    Ok(())
}

pub fn read_meta(path: &Path) -> Result<Meta, CliError> {
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let version = v.get("schema_version").and_then(|s| s.as_str()).unwrap_or("");
    check_version(version)?;
    Ok(serde_json::from_value(v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 12.0, std::f64::consts::PI, 1e20] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
        }
        assert!(format_f64(f64::NAN).parse::<f64>().unwrap().is_nan());
    }

    #[test]
    fn version_gate() {
        assert!(check_version("1.0.0").is_ok());
        assert!(check_version("1.7.2").is_ok());
        assert!(check_version("2.0.0").is_err());
        assert!(check_version("").is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = ConfigFile { g: Some(0.8), ..Default::default() };
        let b = ConfigFile { g: Some(0.8000000000000002), ..Default::default() };
        assert_eq!(params_hash(&a), params_hash(&a.clone()));
        assert_ne!(params_hash(&a), params_hash(&b));
        assert_eq!(params_hash(&a).len(), 64);
        assert_eq!(params_hash(&a), params_hash(&ConfigFile { out: Some("x".into()), ..a }));
    }
}
