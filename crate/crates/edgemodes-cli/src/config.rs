//! Run configuration: file/flag layer in user units, validated layer in radians.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use edgemodes::lindblad::DENSITY_CAP;
use edgemodes::statevector::{DENSE_CAP, DYNAMICS_CAP};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "EDGEMODES_OUT";
pub const DEFAULT_OUT: &str = "edgemodes-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    #[serde(alias = "spectroscopy")]
    Spectrum,
    Dynamics,
    DisorderSweep,
    Lindblad,
    Reconstruct,
    Xy,
    Splitting,
    Pairing,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Spectrum => "spectrum",
            Scenario::Dynamics => "dynamics",
            Scenario::DisorderSweep => "disorder-sweep",
            Scenario::Lindblad => "lindblad",
            Scenario::Reconstruct => "reconstruct",
            Scenario::Xy => "xy",
            Scenario::Splitting => "splitting",
            Scenario::Pairing => "pairing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    #[default]
    Rectangular,
    Hann,
}

/// Keys as written in config files. Angles δ and ζ are in units of π.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Scenario>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    /// Uniform field angle in radians.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Per-site field angles in radians; overrides `h`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_sites: Option<Vec<f64>>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_grid: Option<Vec<f64>>,
    #[serde(rename = "L_set", skip_serializing_if = "Option::is_none")]
    pub l_set: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_shots: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    /// TOML for `.toml` files, JSON otherwise.
    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let toml = path.extension().is_some_and(|e| e == "toml");
        if toml {
            toml::from_str(text).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))
        } else {
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: ConfigFile) -> ConfigFile {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigFile { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            scenario, l, g, zeta, j, h, h_sites, t, delta, delta_grid, g_grid, l_set, h_grid, ensemble, seed, gamma_phi,
            gamma_d, shots, sample_shots, window, threads, out
        )
    }
}

/// Validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub l: usize,
    pub g: Option<f64>,
    /// XY rotation angle in radians.
    pub zeta: Option<f64>,
    pub j: f64,
    pub h: Vec<f64>,
    pub t_len: usize,
    /// Disorder half-width in radians.
    pub delta: f64,
    /// Disorder grid in radians.
    pub delta_grid: Vec<f64>,
    pub g_grid: Vec<f64>,
    pub l_set: Vec<usize>,
    pub h_grid: Vec<f64>,
    pub ensemble: usize,
    pub seed: u64,
    pub gamma_phi: f64,
    pub gamma_d: f64,
    pub shots: u64,
    pub sample_shots: bool,
    pub window: WindowKind,
    pub threads: Option<usize>,
    pub out: PathBuf,
    /// The file layer with defaults filled; emitting this and parsing it back is the identity.
    pub file: ConfigFile,
}

fn bad(key: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key}: {reason}"))
}

fn need_g(c: &RunConfig) -> Result<f64, CliError> {
    c.g.ok_or_else(|| bad("g", format!("required for scenario `{}`", c.scenario.name())))
}

impl RunConfig {
    /// Fills defaults, converts units and validates; `env_out` is the value of `EDGEMODES_OUT`.
    pub fn resolve(file: ConfigFile, env_out: Option<PathBuf>) -> Result<Self, CliError> {
        let scenario = file.scenario.ok_or_else(|| bad("scenario", "missing"))?;
        let l = file.l.unwrap_or(12);
        if file.g.is_some() && file.zeta.is_some() {
            return Err(bad("g/zeta", "g selects the kicked-Ising drive and zeta the XY drive; set only one"));
        }
        let zeta_pi = match scenario {
            Scenario::Xy => Some(file.zeta.unwrap_or(1.0)),
            _ => file.zeta,
        };
        let h = match (&file.h_sites, file.h) {
            (Some(v), _) => v.clone(),
            (None, h) => vec![h.unwrap_or(0.0); l],
        };
        let filled = ConfigFile {
            scenario: Some(scenario),
            l: Some(l),
            g: file.g,
            zeta: zeta_pi,
            j: Some(file.j.unwrap_or(0.5)),
            h: file.h.or(if file.h_sites.is_none() { Some(0.0) } else { None }),
            h_sites: file.h_sites.clone(),
            t: Some(file.t.unwrap_or(200)),
            delta: Some(file.delta.unwrap_or(0.0)),
            delta_grid: Some(file.delta_grid.clone().unwrap_or_else(|| vec![0.0, 0.01, 0.02, 0.05, 0.1])),
            g_grid: file.g_grid.clone().or(file.g.map(|g| vec![g])),
            l_set: Some(file.l_set.clone().unwrap_or_else(|| vec![l])),
            h_grid: Some(file.h_grid.clone().unwrap_or_else(|| vec![0.0])),
            ensemble: Some(file.ensemble.unwrap_or(40)),
            seed: Some(file.seed.unwrap_or(0)),
            gamma_phi: Some(file.gamma_phi.unwrap_or(0.0)),
            gamma_d: Some(file.gamma_d.unwrap_or(0.0)),
            shots: Some(file.shots.unwrap_or(10_000)),
            sample_shots: Some(file.sample_shots.unwrap_or(false)),
            window: Some(file.window.unwrap_or_default()),
            threads: file.threads,
            out: Some(file.out.clone().or(env_out).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))),
        };
        let c = RunConfig {
            scenario,
            l,
            g: filled.g,
            zeta: zeta_pi.map(|z| z * PI),
            j: filled.j.unwrap(),
            h,
            t_len: filled.t.unwrap(),
            delta: filled.delta.unwrap() * PI,
            delta_grid: filled.delta_grid.as_ref().unwrap().iter().map(|d| d * PI).collect(),
            g_grid: filled.g_grid.clone().unwrap_or_default(),
            l_set: filled.l_set.clone().unwrap(),
            h_grid: filled.h_grid.clone().unwrap(),
            ensemble: filled.ensemble.unwrap(),
            seed: filled.seed.unwrap(),
            gamma_phi: filled.gamma_phi.unwrap(),
            gamma_d: filled.gamma_d.unwrap(),
            shots: filled.shots.unwrap(),
            sample_shots: filled.sample_shots.unwrap(),
            window: filled.window.unwrap(),
            threads: filled.threads,
            out: filled.out.clone().unwrap(),
            file: filled,
        };
        c.validate()?;
        Ok(c)
    }

    /// Checks ranges and the engine size caps before anything is allocated.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.l < 2 {
            return Err(bad("L", format!("need L >= 2, got {}", self.l)));
        }
        if self.h.len() != self.l {
            return Err(bad("h_sites", format!("{} values for L = {}", self.h.len(), self.l)));
        }
        if self.t_len < 2 {
            return Err(bad("T", "need at least 2 cycles"));
        }
        if self.ensemble == 0 {
            return Err(bad("ensemble", "need at least one member"));
        }
        if self.threads == Some(0) {
            return Err(bad("threads", "need at least one thread"));
        }
        if self.delta < 0.0 || self.delta_grid.iter().any(|d| *d < 0.0) {
            return Err(bad("delta", "disorder strength must be non-negative"));
        }
        if self.gamma_phi < 0.0 || self.gamma_d < 0.0 {
            return Err(bad("gamma", "rates must be non-negative"));
        }
        let cap = |cap: usize, engine: &str| {
            if self.l > cap {
                Err(bad("L", format!("L = {} exceeds the {engine} limit {cap}", self.l)))
            } else {
                Ok(())
            }
        };
        let kicked = || {
            if self.zeta.is_some() {
                Err(bad("zeta", format!("scenario `{}` uses the kicked-Ising drive", self.scenario.name())))
            } else {
                need_g(self).map(|_| ())
            }
        };
        match self.scenario {
            Scenario::Spectrum | Scenario::Splitting => {
                if self.zeta.is_some() {
                    return Err(bad("zeta", "free-fermion scenarios use the kicked-Ising drive"));
                }
                if self.g_grid.is_empty() {
                    return Err(bad("g", "set g or g_grid"));
                }
                if let Some(l) = self.l_set.iter().find(|&&l| l < 2) {
                    return Err(bad("L_set", format!("need L >= 2, got {l}")));
                }
                if self.scenario == Scenario::Splitting && self.l_set.len() < 2 {
                    return Err(bad("L_set", "need at least two sizes"));
                }
                Ok(())
            }
            Scenario::Dynamics | Scenario::DisorderSweep => {
                kicked()?;
                cap(DYNAMICS_CAP, "statevector")
            }
            Scenario::Xy => {
                if self.g.is_some() {
                    return Err(bad("g", "the XY scenario takes zeta"));
                }
                Ok(())
            }
            Scenario::Lindblad => {
                if self.zeta.is_some() {
                    return Err(bad("zeta", "lindblad runs use the kicked-Ising drive"));
                }
                if self.g_grid.is_empty() {
                    return Err(bad("g", "set g or g_grid"));
                }
                cap(DENSITY_CAP, "density-matrix")
            }
            Scenario::Reconstruct => {
                kicked()?;
                if self.gamma_phi > 0.0 || self.gamma_d > 0.0 {
                    cap(DENSITY_CAP, "density-matrix")
                } else {
                    cap(DYNAMICS_CAP, "statevector")
                }
            }
            Scenario::Pairing => {
                kicked()?;
                cap(DENSE_CAP, "dense diagonalization")
            }
        }
    }

    pub fn g(&self) -> Result<f64, CliError> {
        need_g(self)
    }
}
