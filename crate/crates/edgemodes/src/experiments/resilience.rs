use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ensemble_mean, EnsembleSpec};
use crate::core::ChainParams;
use crate::error::{Error, Result};
use crate::spectroscopy::{fourier_spectrum, peak_amplitude, SpectrumOptions, TimeSeries};
use crate::statevector::{KickedIsingCycle, StateVector, XyCycle};

/// Half-width of the frequency window around the edge peak.
pub const PEAK_WINDOW: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ResilienceModel {
    /// Observable z_1 <Z_1(t)> from random bitstrings.
    KickedIsing { g: f64, j: f64 },
    /// Observable <X_1(t) + i Y_1(t)> from one excitation on site 1.
    Xy { zeta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuMaxRow {
    /// Disorder half-width in radians.
    pub delta: f64,
    pub nu_max: f64,
    /// nu_max over its value in the first row (delta = 0 in the usual grid).
    pub normalized: f64,
    pub omega: f64,
}

/// Largest interpolated nu(omega) within `half_width` of `center` (circular).
pub fn nu_max_in_window(series: &TimeSeries, center: f64, half_width: f64, options: SpectrumOptions) -> Result<(f64, f64)> {
    let spec = fourier_spectrum(series, options)?;
    let lo = (center - half_width).rem_euclid(2.0 * PI);
    let hi = (center + half_width).rem_euclid(2.0 * PI);
    let (w, v) = peak_amplitude(&spec, lo, hi)?;
    Ok((v, w))
}

/// z_1 <Z_1(t)> for a kicked-Ising chain with fields h, from bitstring b.
fn kicked_z1(l: usize, g: f64, j: f64, h: &[f64], b: &crate::core::BitString, t_len: usize) -> Result<Vec<Complex64>> {
    let cycle = KickedIsingCycle::new(&ChainParams::kicked_ising(l, g, j).with_h(h.to_vec()))?;
    let mut s = StateVector::from_bitstring(b)?;
    let z1 = b.z(0);
    let mut out = Vec::with_capacity(t_len);
    for t in 0..t_len {
        if t > 0 {
            cycle.apply(&mut s);
        }
        out.push(Complex64::new(z1 * s.z(0), 0.0));
    }
    Ok(out)
}

/// Ensemble-averaged edge observable for one disorder strength.
pub fn edge_series(model: ResilienceModel, l: usize, ensemble: &EnsembleSpec, t_len: usize) -> Result<TimeSeries> {
    let r = ensemble_mean(ensemble, l, false, |_, h, b| match model {
        ResilienceModel::KickedIsing { g, j } => kicked_z1(l, g, j, h, b, t_len),
        ResilienceModel::Xy { zeta } => Ok(XyCycle::from_parts(l, zeta, h).sigma_plus_series(t_len)),
    })?;
    Ok(TimeSeries::complex(format!("{model:?} delta={}", ensemble.delta), r.mean))
}

fn sweep(
    model: ResilienceModel,
    l: usize,
    deltas: &[f64],
    size: usize,
    seed: u64,
    t_len: usize,
    center: f64,
) -> Result<(Vec<NuMaxRow>, Vec<TimeSeries>)> {
    if deltas.is_empty() {
        return Err(Error::ShortSeries { need: 1, got: 0 });
    }
    let mut rows: Vec<NuMaxRow> = Vec::new();
    let mut series = Vec::new();
    for &delta in deltas {
        // the same seed at every delta: draws scale with delta (common random numbers)
        let ens = EnsembleSpec::new(size, seed, delta);
        let s = edge_series(model, l, &ens, t_len)?;
        let (nu, w) = nu_max_in_window(&s, center, PEAK_WINDOW, SpectrumOptions::default())?;
        let base = rows.first().map_or(nu, |r| r.nu_max);
        rows.push(NuMaxRow { delta, nu_max: nu, normalized: nu / base, omega: w });
        series.push(s);
    }
    Ok((rows, series))
}

/// nu_max(delta) near omega = pi for either model.
pub fn scenario_noise_resilience(
    model: ResilienceModel,
    l: usize,
    deltas: &[f64],
    size: usize,
    seed: u64,
    t_len: usize,
) -> Result<Vec<NuMaxRow>> {
    Ok(sweep(model, l, deltas, size, seed, t_len, PI)?.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroMem {
    pub rows: Vec<NuMaxRow>,
    /// Ensemble-averaged z_1 <Z_1(t)> for each delta.
    pub series: Vec<Vec<f64>>,
    /// Strongest interpolated peak over the full circle, for the first delta.
    pub dominant_omega: f64,
}

/// The g < J regime: edge peak at omega = 0 and its insensitivity to disorder.
pub fn scenario_zero_mem(g: f64, j: f64, l: usize, deltas: &[f64], size: usize, seed: u64, t_len: usize) -> Result<ZeroMem> {
    if g >= j {
        return Err(Error::InvalidParam { name: "g", reason: format!("zero-mode regime needs g < J, got g = {g}, J = {j}") });
    }
    let (rows, series) = sweep(ResilienceModel::KickedIsing { g, j }, l, deltas, size, seed, t_len, 0.0)?;
    let spec = fourier_spectrum(&series[0], SpectrumOptions::default())?;
    let (dominant_omega, _) = peak_amplitude(&spec, 0.0, 2.0 * PI)?;
    Ok(ZeroMem { rows, series: series.iter().map(|s| s.re()).collect(), dominant_omega })
}
