use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ensemble_mean, EnsembleSpec};
use crate::core::{sin_cos_pi, BitString, ChainParams, Pauli, PauliString};
use crate::error::{Error, Result};
use crate::statevector::{z_autocorrelator, KickedIsingCycle, StateVector, DYNAMICS_CAP};

/// First t after which |values| stays below `threshold`; None if it never settles.
pub fn decay_time(values: &[f64], threshold: f64) -> Option<usize> {
    let last_above = values.iter().rposition(|v| v.abs() >= threshold)?;
    (last_above + 1 < values.len()).then_some(last_above + 1)
}

fn check_dynamics(l: usize) -> Result<()> {
    if l > DYNAMICS_CAP {
        return Err(Error::SizeLimit { l, cap: DYNAMICS_CAP, engine: "statevector" });
    }
    Ok(())
}

/// z_j(0) <Z_j(t)> for all sites from one bitstring, rows t.
fn site_autocorrelators(params: &ChainParams, b: &BitString, t_len: usize) -> Result<Vec<f64>> {
    let cycle = KickedIsingCycle::new(params)?;
    let mut s = StateVector::from_bitstring(b)?;
    let mut out = Vec::with_capacity(t_len * params.l);
    for t in 0..t_len {
        if t > 0 {
            cycle.apply(&mut s);
        }
        out.extend((0..params.l).map(|j| b.z(j) * s.z(j)));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeVsBulk {
    pub l: usize,
    /// Ensemble mean of z_j(0) <Z_j(t)>, rows t, columns j.
    pub autocorrelation: Vec<Vec<f64>>,
    /// Mean of the two edge sites.
    pub edge: Vec<f64>,
    /// Mean over sites 2..L-1.
    pub bulk: Vec<f64>,
    /// 1/e decay times (cycles); None when the signal outlives the run.
    pub edge_lifetime: Option<usize>,
    pub bulk_lifetime: Option<usize>,
}

/// Per-site autocorrelators for fields `params.h` plus the ensemble disorder.
/// A one-member ensemble with delta = 0 is a single deterministic trajectory.
pub fn scenario_edge_vs_bulk(params: &ChainParams, ensemble: &EnsembleSpec, t_len: usize) -> Result<EdgeVsBulk> {
    let l = params.l;
    check_dynamics(l)?;
    if l < 3 {
        return Err(Error::InvalidParam { name: "L", reason: "need a bulk site (L >= 3)".into() });
    }
    let r = ensemble_mean(ensemble, l, false, |_, dh, b| {
        let h: Vec<f64> = params.h.iter().zip(dh).map(|(a, d)| a + d).collect();
        site_autocorrelators(&params.clone().with_h(h), b, t_len)
    })?;
    let autocorrelation: Vec<Vec<f64>> = r.mean.chunks(l).map(<[f64]>::to_vec).collect();
    let edge: Vec<f64> = autocorrelation.iter().map(|row| 0.5 * (row[0] + row[l - 1])).collect();
    let bulk: Vec<f64> = autocorrelation.iter().map(|row| row[1..l - 1].iter().sum::<f64>() / (l - 2) as f64).collect();
    let inv_e = (-1.0f64).exp();
    Ok(EdgeVsBulk {
        l,
        edge_lifetime: decay_time(&edge, inv_e),
        bulk_lifetime: decay_time(&bulk, inv_e),
        autocorrelation,
        edge,
        bulk,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbativeRow {
    pub h1: f64,
    /// Late-time plateau of (-1)^t <Z_1(0) Y_1 Z_2(t)> at infinite temperature.
    pub amplitude: f64,
    /// Same plateau for <Z_1(0) Z_1(t)>; its square root estimates alpha_Z1.
    pub z1_plateau: f64,
    /// -cos(pi g/2) h_1 sqrt(z1_plateau).
    pub predicted: f64,
}

/// Linear response of the pi mode to a field h_1 on the first site only.
///
/// Averages exactly over all 2^L bitstrings (infinite temperature), so there is
/// no sampling floor; the plateau is the mean over cycles [t0, t1).
pub fn scenario_perturbative_correction(
    g: f64,
    j: f64,
    l: usize,
    h1_grid: &[f64],
    window: (usize, usize),
) -> Result<Vec<PerturbativeRow>> {
    if l > 10 {
        return Err(Error::SizeLimit { l, cap: 10, engine: "exhaustive bitstring average" });
    }
    let (t0, t1) = window;
    if t0 >= t1 {
        return Err(Error::ShortSeries { need: 1, got: 0 });
    }
    let ops = [PauliString::single(l, 0, Pauli::Z), PauliString::from_sites(l, &[(0, Pauli::Y), (1, Pauli::Z)])];
    let (_, cos) = sin_cos_pi(g / 2.0);
    h1_grid
        .iter()
        .map(|&h1| {
            let mut h = vec![0.0; l];
            h[0] = h1;
            let params = ChainParams::kicked_ising(l, g, j).with_h(h);
            let mut acc = [0.0; 2];
            for idx in 0..1usize << l {
                let c = z_autocorrelator(&params, &BitString::from_index(idx, l), &ops, t1)?;
                for (t, row) in c.iter().enumerate().take(t1).skip(t0) {
                    let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
                    acc[0] += sign * row[0];
                    acc[1] += sign * row[1];
                }
            }
            let n = ((t1 - t0) << l) as f64;
            let (z1_plateau, amplitude) = (acc[0] / n, acc[1] / n);
            Ok(PerturbativeRow { h1, amplitude, z1_plateau, predicted: -cos * h1 * z1_plateau.max(0.0).sqrt() })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrotterLimit {
    pub g: f64,
    pub j: f64,
    pub result: EdgeVsBulk,
}

/// Edge vs bulk autocorrelators at small (g, J): a fine Trotterization of the
/// transverse-field Ising Hamiltonian.
pub fn scenario_trotter_limit(g: f64, j: f64, l: usize, ensemble: &EnsembleSpec, t_len: usize) -> Result<TrotterLimit> {
    let result = scenario_edge_vs_bulk(&ChainParams::kicked_ising(l, g, j), ensemble, t_len)?;
    Ok(TrotterLimit { g, j, result })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrotterError {
    /// Step s: each cycle uses (g, J) = s (g0, J0).
    pub step: f64,
    pub cycles: usize,
    /// max_j |<Z_j(tau)>_cycles - <Z_j(tau)>_exact|.
    pub error: f64,
}

/// Compares cycles at (s g0, s J0) against exp(-i tau H) with
/// H = (pi/2)(g0 sum X_j + J0 sum Z_j Z_{j+1}), for tau / s cycles from bitstring b.
pub fn trotter_vs_hamiltonian(g0: f64, j0: f64, b: &BitString, tau: f64, steps: &[f64]) -> Result<Vec<TrotterError>> {
    let l = b.len();
    if l > 10 {
        return Err(Error::SizeLimit { l, cap: 10, engine: "Hamiltonian oracle" });
    }
    let n = 1usize << l;
    let z = |b: usize, k: usize| if (b >> k) & 1 == 0 { 1.0 } else { -1.0 };
    let h = Mat::<f64>::from_fn(n, n, |r, c| {
        if r == c {
            0.5 * PI * j0 * (0..l - 1).map(|k| z(r, k) * z(r, k + 1)).sum::<f64>()
        } else if (r ^ c).count_ones() == 1 {
            0.5 * PI * g0
        } else {
            0.0
        }
    });
    let evd = h.selfadjoint_eigendecomposition(faer::Side::Lower);
    let (u, e) = (evd.u(), evd.s().column_vector());
    let start = b.index();
    // psi(tau) = U diag(e^{-i tau E}) U^T |b>
    let mut exact = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let w = Complex64::from_polar(u.read(start, k), -tau * e.read(k));
        for (r, x) in exact.iter_mut().enumerate() {
            *x += w * u.read(r, k);
        }
    }
    let exact_z: Vec<f64> = (0..l).map(|k| exact.iter().enumerate().map(|(r, a)| z(r, k) * a.norm_sqr()).sum()).collect();
    steps
        .iter()
        .map(|&s| {
            let cycles = (tau / s).round() as usize;
            if ((cycles as f64) * s - tau).abs() > 1e-9 * tau.max(1.0) {
                return Err(Error::InvalidParam { name: "step", reason: format!("tau = {tau} is not a multiple of {s}") });
            }
            let cycle = KickedIsingCycle::new(&ChainParams::kicked_ising(l, s * g0, s * j0))?;
            let mut st = StateVector::from_bitstring(b)?;
            for _ in 0..cycles {
                cycle.apply(&mut st);
            }
            let error = (0..l).map(|k| (st.z(k) - exact_z[k]).abs()).fold(0.0, f64::max);
            Ok(TrotterError { step: s, cycles, error })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RabiComparison {
    pub epsilon: f64,
    /// <Z(t)> of a lone qubit kicked by pi (1 + epsilon).
    pub single: Vec<f64>,
    /// z_1 <Z_1(t)> on a chain with g = 1 + epsilon, J = 1/2, h = 0, from |0...0>.
    pub edge: Vec<f64>,
    /// min_t (-1)^t x(t): near 1 for a locked pi response, negative once it beats.
    pub single_lock: f64,
    pub edge_lock: f64,
}

/// Coherent over-rotation error: a single qubit beats, the chain's edge stays locked at pi.
pub fn scenario_rabi_comparison(epsilon: f64, l: usize, t_len: usize) -> Result<RabiComparison> {
    check_dynamics(l)?;
    let g = 1.0 + epsilon;
    let single: Vec<f64> = (0..t_len).map(|t| (PI * g * t as f64).cos()).collect();
    let b = BitString::zeros(l);
    let edge: Vec<f64> = site_autocorrelators(&ChainParams::kicked_ising(l, g, 0.5), &b, t_len)?.chunks(l).map(|r| r[0]).collect();
    let lock = |x: &[f64]| x.iter().enumerate().map(|(t, v)| if t % 2 == 0 { *v } else { -v }).fold(f64::INFINITY, f64::min);
    Ok(RabiComparison { epsilon, single_lock: lock(&single), edge_lock: lock(&edge), single, edge })
}
