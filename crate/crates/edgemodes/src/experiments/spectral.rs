use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::core::ChainParams;
use crate::error::{Error, Result};
use crate::freefermion::{
    bulk_band, edge_eigenvalue, hybridization_splitting, localization_length, majorana_autocorrelator, Sector,
    SingleParticleFloquet,
};
use crate::spectroscopy::{fourier_spectrum, local_maxima, peak_amplitude, Spectrum, SpectrumOptions, TimeSeries};
use crate::statevector::{floquet_eigenphases, pi_pairing_defect};

/// Half-width of the search window around pi for the edge peak pair.
const EDGE_WINDOW: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectroscopyPoint {
    pub l: usize,
    pub g: f64,
    pub spectrum: Spectrum,
    /// Single-particle eigenphases in [0, 2pi).
    pub eigenphases: Vec<f64>,
    /// Delta(L) from the eigenphases (pi sector), when the pi mode is localized.
    pub delta_eig: Option<f64>,
    /// |omega* - pi| of the strongest peak within EDGE_WINDOW of pi.
    pub delta_spec: Option<f64>,
    /// Distance from the top of the bulk band to pi.
    pub bulk_gap: f64,
}

/// nu(omega) of <Z_1(0) Z_1(t)> at h = 0 for every (L, g), with both Delta(L) estimates.
pub fn scenario_spectroscopy_sweep(
    g_grid: &[f64],
    l_set: &[usize],
    j: f64,
    t_len: usize,
    options: SpectrumOptions,
) -> Result<Vec<SpectroscopyPoint>> {
    let mut out = Vec::new();
    for &l in l_set {
        for &g in g_grid {
            let f = SingleParticleFloquet::from_couplings(l, g, j);
            let series: Vec<f64> = majorana_autocorrelator(&f, t_len).iter().map(|row| row[0]).collect();
            let spectrum = fourier_spectrum(&TimeSeries::real(format!("Z1 L={l} g={g}"), &series), options)?;
            let localized = edge_eigenvalue(g, j, Sector::Pi).localized;
            let delta_eig = if localized {
                Some(hybridization_splitting(&ChainParams::kicked_ising(l, g, j), Sector::Pi)?)
            } else {
                None
            };
            let delta_spec = if localized {
                peak_amplitude(&spectrum, PI - EDGE_WINDOW, PI + EDGE_WINDOW).ok().map(|(w, _)| (w - PI).abs())
            } else {
                None
            };
            out.push(SpectroscopyPoint {
                l,
                g,
                spectrum,
                eigenphases: f.eigenphases()?,
                delta_eig,
                delta_spec,
                bulk_gap: PI - bulk_band(g, j).1,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakMatch {
    /// Interpolated peak locations, largest first.
    pub peaks: Vec<f64>,
    /// For each target eigenphase, the circular distance to its assigned peak.
    pub distances: Vec<f64>,
    pub max_distance: f64,
}

fn circular(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Takes the `targets.len()` largest local maxima and assigns them one-to-one to
/// the targets in order of increasing distance.
pub fn match_peaks(spec: &Spectrum, targets: &[f64]) -> Result<PeakMatch> {
    let peaks: Vec<f64> = local_maxima(spec).into_iter().take(targets.len()).map(|p| p.0).collect();
    if peaks.len() < targets.len() {
        return Err(Error::TooFewExtrema { need: targets.len(), got: peaks.len() });
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &t) in targets.iter().enumerate() {
        for (k, &p) in peaks.iter().enumerate() {
            pairs.push((circular(t, p), i, k));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut distances = vec![f64::NAN; targets.len()];
    let mut used = vec![false; peaks.len()];
    for (d, i, k) in pairs {
        if distances[i].is_nan() && !used[k] {
            distances[i] = d;
            used[k] = true;
        }
    }
    let max_distance = distances.iter().fold(0.0, |a: f64, &b| a.max(b));
    Ok(PeakMatch { peaks, distances, max_distance })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingLaw {
    pub g: f64,
    pub ls: Vec<usize>,
    pub deltas: Vec<f64>,
    /// Least-squares slope of ln Delta vs L.
    pub slope: f64,
    pub xi_pi: f64,
    /// slope * xi + 1; zero for a pure exp(-L/xi) law.
    pub relative_error: f64,
    /// Slopes between neighbouring L; their spread measures curvature.
    pub local_slopes: Vec<f64>,
}

pub fn splitting_law(g: f64, j: f64, ls: &[usize]) -> Result<SplittingLaw> {
    if ls.len() < 2 {
        return Err(Error::ShortSeries { need: 2, got: ls.len() });
    }
    let deltas: Vec<f64> =
        ls.iter().map(|&l| hybridization_splitting(&ChainParams::kicked_ising(l, g, j), Sector::Pi)).collect::<Result<_>>()?;
    if let Some(d) = deltas.iter().find(|d| **d <= 0.0) {
        return Err(Error::Numerical(format!("non-positive splitting {d}")));
    }
    let xs: Vec<f64> = ls.iter().map(|&l| l as f64).collect();
    let ys: Vec<f64> = deltas.iter().map(|d| d.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let xi_pi = localization_length(edge_eigenvalue(g, j, Sector::Pi).lambda);
    let local_slopes = xs.windows(2).zip(ys.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect();
    Ok(SplittingLaw { g, ls: ls.to_vec(), deltas, slope, xi_pi, relative_error: slope * xi_pi + 1.0, local_slopes })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingRow {
    pub g: f64,
    pub l: usize,
    /// Uniform field h; every site gets the field angle 2h.
    pub h: f64,
    pub defect: f64,
    /// defect / (2 pi / 2^L).
    pub ratio: f64,
}

/// Pairing defect over the mean many-body level spacing, uniform field angle 2h on every site.
pub fn pairing_ratio(g: f64, j: f64, l: usize, h: f64) -> Result<PairingRow> {
    let params = ChainParams::kicked_ising(l, g, j).with_uniform_h(2.0 * h);
    let defect = pi_pairing_defect(&floquet_eigenphases(&params)?);
    let spacing = 2.0 * PI / (1usize << l) as f64;
    Ok(PairingRow { g, l, h, defect, ratio: defect / spacing })
}

pub fn scenario_pairing(g: f64, j: f64, l: usize, h_grid: &[f64]) -> Result<Vec<PairingRow>> {
    h_grid.iter().map(|&h| pairing_ratio(g, j, l, h)).collect()
}
