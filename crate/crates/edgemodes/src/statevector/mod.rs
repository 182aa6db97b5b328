//! Dense many-body simulator: kicked Ising and XY cycles, Pauli measurement,
//! shot sampling, and exact Floquet diagonalization.

pub mod diag;
pub mod kicked;
pub mod xy;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::core::{BitString, PauliString};
use crate::error::{Error, Result};

pub use diag::{
    exact_floquet_diagonalize, floquet_eigenphases, floquet_unitary, pi_pairing_defect, FloquetSpectrum, DENSE_CAP,
};
pub use kicked::{apply_kicked_ising_cycle, ising_diagonal, z_autocorrelator, z_trajectory, KickedIsingCycle};
pub use xy::{apply_xy_cycle, xy_single_excitation_modes, XyCycle, XyModes};

/// Largest chain for time evolution.
pub const DYNAMICS_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub l: usize,
    /// Amplitude of basis state b, bit j of b = site j.
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(l: usize, index: usize) -> Result<Self> {
        check_size(l)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << l];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { l, amps })
    }

    pub fn zeros(l: usize) -> Result<Self> {
        Self::basis(l, 0)
    }

    pub fn from_bitstring(b: &BitString) -> Result<Self> {
        Self::basis(b.len(), b.index())
    }

    pub fn from_amplitudes(l: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(l)?;
        if amps.len() != 1 << l {
            return Err(Error::LengthMismatch { left: amps.len(), right: 1 << l });
        }
        Ok(StateVector { l, amps })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// <Z_j>, without building a Pauli string.
    pub fn z(&self, j: usize) -> f64 {
        let bit = 1 << j;
        self.amps.iter().enumerate().map(|(b, a)| if b & bit == 0 { a.norm_sqr() } else { -a.norm_sqr() }).sum()
    }

    /// P |psi>.
    pub fn apply_pauli(&self, p: &PauliString) -> Result<StateVector> {
        if p.len() != self.l {
            return Err(Error::LengthMismatch { left: p.len(), right: self.l });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let (mask, c) = p.apply_to_basis(b);
            out[b ^ mask] += c * a;
        }
        Ok(StateVector { l: self.l, amps: out })
    }
}

pub(crate) fn check_size(l: usize) -> Result<()> {
    if l > DYNAMICS_CAP {
        return Err(Error::SizeLimit { l, cap: DYNAMICS_CAP, engine: "statevector" });
    }
    if l == 0 {
        return Err(Error::InvalidParam { name: "L", reason: "empty chain".into() });
    }
    Ok(())
}

/// Exact <psi|P|psi> for Hermitian P.
pub fn measure_pauli(state: &StateVector, p: &PauliString) -> Result<f64> {
    if p.len() != state.l {
        return Err(Error::LengthMismatch { left: p.len(), right: state.l });
    }
    if !p.is_hermitian() {
        return Err(Error::NonHermitian(p.phase.to_string()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, a) in state.amps.iter().enumerate() {
        let (mask, c) = p.apply_to_basis(b);
        acc += state.amps[b ^ mask].conj() * c * a;
    }
    if acc.im.abs() > 1e-10 {
        return Err(Error::Numerical(format!("imaginary expectation {} for Hermitian {p}", acc.im)));
    }
    Ok(acc.re)
}

/// Empirical mean of `n_shots` projective measurements of P (outcomes +-1).
pub fn sample_shots<R: Rng + ?Sized>(state: &StateVector, p: &PauliString, n_shots: u64, rng: &mut R) -> Result<f64> {
    if n_shots == 0 {
        return Err(Error::InvalidParam { name: "n_shots", reason: "need at least one shot".into() });
    }
    let e = measure_pauli(state, p)?;
    Ok(sample_from_expectation(e, n_shots, rng))
}

/// Binomial shot estimate for a +-1 observable with exact mean `e`.
pub fn sample_from_expectation<R: Rng + ?Sized>(e: f64, n_shots: u64, rng: &mut R) -> f64 {
    let p_plus = ((1.0 + e) / 2.0).clamp(0.0, 1.0);
    let k = Binomial::new(n_shots, p_plus).expect("probability in [0, 1]").sample(rng);
    2.0 * k as f64 / n_shots as f64 - 1.0
}
