//! Shared domain types: drive parameters, Pauli algebra, bitstrings, RNG streams.
//!
//! Sites are 0-based in code.  Bit j of a basis index is site j, and bit value 0
//! means Z = +1.  Field angles h_j are radians.

pub mod majorana;
pub mod pauli;
pub mod rng;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use majorana::{majorana_index, majorana_site, majorana_to_pauli, pauli_to_majorana, MajoranaMonomial, Parity};
pub use pauli::{Pauli, PauliString, Phase};
pub use rng::{sample_disorder, RngSpec};

/// (sin(pi x), cos(pi x)), exact when 2x is an integer.
pub fn sin_cos_pi(x: f64) -> (f64, f64) {
    if (2.0 * x).fract() == 0.0 {
        match (2.0 * x).rem_euclid(4.0) as u8 {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        (PI * x).sin_cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Variant {
    KickedIsing,
    XyModel { zeta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub l: usize,
    /// Kick strength in units of pi/2 rotations.
    pub g: f64,
    /// Ising coupling in units of pi/2.
    pub j: f64,
    /// Longitudinal field angles (radians), one per site.
    pub h: Vec<f64>,
    pub variant: Variant,
}

impl ChainParams {
    pub fn kicked_ising(l: usize, g: f64, j: f64) -> Self {
        ChainParams { l, g, j, h: vec![0.0; l], variant: Variant::KickedIsing }
    }

    pub fn xy(l: usize, zeta: f64) -> Self {
        ChainParams { l, g: 0.0, j: 0.0, h: vec![0.0; l], variant: Variant::XyModel { zeta } }
    }

    pub fn with_h(mut self, h: Vec<f64>) -> Self {
        self.h = h;
        self
    }

    pub fn with_uniform_h(mut self, h: f64) -> Self {
        self.h = vec![h; self.l];
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 2 {
            return Err(Error::InvalidParam { name: "L", reason: format!("need L >= 2, got {}", self.l) });
        }
        if self.h.len() != self.l {
            return Err(Error::LengthMismatch { left: self.h.len(), right: self.l });
        }
        if !self.g.is_finite() || !self.j.is_finite() {
            return Err(Error::InvalidParam { name: "g/J", reason: "non-finite".into() });
        }
        if let Some(x) = self.h.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidParam { name: "h", reason: format!("non-finite entry {x}") });
        }
        if let Variant::XyModel { zeta } = self.variant {
            if !zeta.is_finite() {
                return Err(Error::InvalidParam { name: "zeta", reason: "non-finite".into() });
            }
        }
        Ok(())
    }

    pub fn max_abs_h(&self) -> f64 {
        self.h.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    pub fn is_integrable(&self) -> bool {
        self.variant == Variant::KickedIsing && self.max_abs_h() == 0.0
    }
}

/// Computational basis state.  `bits[j]` is site j; 0 means Z = +1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitString {
    pub bits: Vec<u8>,
}

impl BitString {
    pub fn zeros(l: usize) -> Self {
        BitString { bits: vec![0; l] }
    }

    pub fn from_index(index: usize, l: usize) -> Self {
        BitString { bits: (0..l).map(|j| ((index >> j) & 1) as u8).collect() }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().enumerate().fold(0, |acc, (j, &b)| acc | ((b as usize & 1) << j))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Z eigenvalue on site j.
    pub fn z(&self, j: usize) -> f64 {
        if self.bits[j] == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn random<R: rand::Rng + ?Sized>(l: usize, rng: &mut R) -> Self {
        BitString { bits: (0..l).map(|_| rng.gen_range(0..2u8)).collect() }
    }
}
