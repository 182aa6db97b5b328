//! Fourier amplitude spectra of cycle-indexed observables, peak extraction,
//! and envelope fits.

pub mod fit;

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fit::{envelope_log_slope, fit_envelope, log_slope, EnvelopeFit, EnvelopeModel, FitOptions};

/// Duration of one drive cycle on the reference device, for time-axis labels only.
pub const CYCLE_NS: f64 = 93.0;

/// One sample per Floquet cycle, t = 0..T-1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub label: String,
    pub values: Vec<Complex64>,
}

impl TimeSeries {
    pub fn real(label: impl Into<String>, values: &[f64]) -> Self {
        TimeSeries { label: label.into(), values: values.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn complex(label: impl Into<String>, values: Vec<Complex64>) -> Self {
        TimeSeries { label: label.into(), values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub window: Window,
    /// Total length is T * pad_factor; 1 means no padding.
    pub pad_factor: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { window: Window::Rectangular, pad_factor: 1 }
    }
}

/// nu(omega_k) on omega_k = 2 pi k / (T * pad) in [0, 2pi).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub omega: Vec<f64>,
    pub nu: Vec<f64>,
    pub t_len: usize,
    pub options: SpectrumOptions,
}

impl Spectrum {
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.omega.len() as f64
    }
}

fn window_weights(w: Window, n: usize) -> Vec<f64> {
    match w {
        Window::Rectangular => vec![1.0; n],
        Window::Hann => (0..n).map(|t| 0.5 - 0.5 * (2.0 * PI * t as f64 / (n - 1) as f64).cos()).collect(),
    }
}

/// nu(omega) = |sum_t w_t x_t e^{-i omega t}| / sum_t w_t, so a unit tone
/// e^{i omega_0 t} on the grid gives nu(omega_0) = 1.
pub fn fourier_spectrum(series: &TimeSeries, options: SpectrumOptions) -> Result<Spectrum> {
    let t_len = series.len();
    if t_len < 8 {
        return Err(Error::ShortSeries { need: 8, got: t_len });
    }
    let pad = options.pad_factor.max(1);
    let n = t_len * pad;
    let w = window_weights(options.window, t_len);
    let norm: f64 = w.iter().sum();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (t, (x, wt)) in series.values.iter().zip(&w).enumerate() {
        buf[t] = x * wt;
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    Ok(Spectrum {
        omega: (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect(),
        nu: buf.iter().map(|z| z.norm() / norm).collect(),
        t_len,
        options: SpectrumOptions { window: options.window, pad_factor: pad },
    })
}

/// Parabolic vertex through three equally spaced samples: (offset in bins, height).
fn parabolic(a: f64, b: f64, c: f64) -> (f64, f64) {
    let den = a - 2.0 * b + c;
    if den.abs() < 1e-300 {
        return (0.0, b);
    }
    let d = (0.5 * (a - c) / den).clamp(-0.5, 0.5);
    (d, b - 0.25 * (a - c) * d)
}

/// The parabola is fitted to log amplitudes, which halves the worst-case
/// bias for the rectangular window's sinc peak; it falls back to linear
/// amplitudes when a neighbour is numerically zero.
fn interpolate(spec: &Spectrum, k: usize) -> (f64, f64) {
    let n = spec.nu.len();
    let (a, b, c) = (spec.nu[(k + n - 1) % n], spec.nu[k], spec.nu[(k + 1) % n]);
    let (d, h) = if a.min(c) > 1e-12 * b {
        let (d, lh) = parabolic(a.ln(), b.ln(), c.ln());
        (d, lh.exp())
    } else {
        parabolic(a, b, c)
    };
    ((spec.omega[k] + d * spec.spacing()).rem_euclid(2.0 * PI), h)
}

/// Largest amplitude with omega in [lo, hi] (circular if lo > hi), refined by
/// quadratic interpolation over the three bins around the grid maximum.
pub fn peak_amplitude(spec: &Spectrum, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let inside = |w: f64| if lo <= hi { w >= lo && w <= hi } else { w >= lo || w <= hi };
    let k = (0..spec.nu.len())
        .filter(|&k| inside(spec.omega[k]))
        .max_by(|&a, &b| spec.nu[a].partial_cmp(&spec.nu[b]).unwrap())
        .ok_or(Error::Window { lo, hi })?;
    Ok(interpolate(spec, k))
}

/// Interpolated local maxima, largest first.
pub fn local_maxima(spec: &Spectrum) -> Vec<(f64, f64)> {
    let n = spec.nu.len();
    let mut out: Vec<(f64, f64)> = (0..n)
        .filter(|&k| {
            let (a, b, c) = (spec.nu[(k + n - 1) % n], spec.nu[k], spec.nu[(k + 1) % n]);
            b > a && b >= c
        })
        .map(|k| interpolate(spec, k))
        .collect();
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    out
}

/// Pointwise mean of equally long series (FFT-after-average, as for disorder ensembles).
pub fn average_series(series: &[TimeSeries]) -> Result<TimeSeries> {
    let first = series.first().ok_or(Error::ShortSeries { need: 1, got: 0 })?;
    let n = first.len();
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for s in series {
        if s.len() != n {
            return Err(Error::LengthMismatch { left: s.len(), right: n });
        }
        acc.iter_mut().zip(&s.values).for_each(|(a, x)| *a += x);
    }
    let m = series.len() as f64;
    Ok(TimeSeries::complex(first.label.clone(), acc.into_iter().map(|z| z / m).collect()))
}
