//! Scenario runners composing the engines at desk scale, with seeded
//! disorder and initial-state ensembles and column tables for output.

pub mod dynamics;
pub mod resilience;
pub mod spectral;

use std::ops::{Add, Div};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core::{sample_disorder, BitString, RngSpec};
use crate::error::{Error, Result};

pub use dynamics::{
    scenario_edge_vs_bulk, scenario_perturbative_correction, scenario_rabi_comparison, scenario_trotter_limit,
    trotter_vs_hamiltonian, EdgeVsBulk, PerturbativeRow, RabiComparison, TrotterLimit,
};
pub use resilience::{nu_max_in_window, scenario_noise_resilience, scenario_zero_mem, NuMaxRow, ResilienceModel, ZeroMem};
pub use spectral::{
    match_peaks, pairing_ratio, scenario_pairing, scenario_spectroscopy_sweep, splitting_law, PairingRow, SpectroscopyPoint,
    SplittingLaw,
};

/// Named columns of equal length, plus units per column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub units: Vec<String>,
    /// Row-major values.
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[(&str, &str)]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.0.to_string()).collect(),
            units: columns.iter().map(|c| c.1.to_string()).collect(),
            rows: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::LengthMismatch { left: row.len(), right: self.columns.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// Disorder and initial-state ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub size: usize,
    pub seed: u64,
    /// Field disorder half-width in radians: h_j uniform in [-delta, delta].
    pub delta: f64,
    /// Random initial bitstrings; otherwise all members start from |0...0>.
    pub random_initial: bool,
}

impl EnsembleSpec {
    pub fn new(size: usize, seed: u64, delta: f64) -> Self {
        EnsembleSpec { size, seed, delta, random_initial: true }
    }

    /// Fields and initial bitstring of member k; independent of every other member.
    pub fn member(&self, k: usize, l: usize) -> (Vec<f64>, BitString) {
        let spec = RngSpec::new(self.seed).child(k as u64);
        let h = sample_disorder(self.delta, l, spec.child(0));
        let b = if self.random_initial { BitString::random(l, &mut spec.child(1).rng()) } else { BitString::zeros(l) };
        (h, b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult<T> {
    pub mean: Vec<T>,
    pub instances: Option<Vec<Vec<T>>>,
    pub spec: EnsembleSpec,
}

/// Runs `member(k, h, b)` for every instance in parallel and averages in index order,
/// so the result does not depend on scheduling.
pub fn ensemble_mean<T, F>(spec: &EnsembleSpec, l: usize, keep_instances: bool, member: F) -> Result<EnsembleResult<T>>
where
    T: Copy + Send + Default + Add<Output = T> + Div<f64, Output = T>,
    F: Fn(usize, &[f64], &BitString) -> Result<Vec<T>> + Sync,
{
    if spec.size == 0 {
        return Err(Error::InvalidParam { name: "ensemble", reason: "empty ensemble".into() });
    }
    let runs: Result<Vec<Vec<T>>> = (0..spec.size)
        .into_par_iter()
        .map(|k| {
            let (h, b) = spec.member(k, l);
            member(k, &h, &b)
        })
        .collect();
    let runs = runs?;
    let len = runs[0].len();
    if let Some(r) = runs.iter().find(|r| r.len() != len) {
        return Err(Error::LengthMismatch { left: r.len(), right: len });
    }
    let mut mean = vec![T::default(); len];
    for r in &runs {
        for (m, &x) in mean.iter_mut().zip(r) {
            *m = *m + x;
        }
    }
    let n = spec.size as f64;
    let mean = mean.into_iter().map(|m| m / n).collect();
    Ok(EnsembleResult { mean, instances: keep_instances.then_some(runs), spec: *spec })
}
