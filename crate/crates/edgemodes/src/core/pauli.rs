use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-site Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Product `self * other` as (phase exponent k, result), phase = i^k.
    pub fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }

    /// 2x2 matrix in the computational basis (bit 0 = Z eigenvalue +1).
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    pub fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Phase i^k for k in 0..4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u8) -> Self {
        Phase(k % 4)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn value(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_power(self.0 + rhs.0)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })
    }
}

/// Tensor product of single-site Paulis with a phase in {±1, ±i}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    pub ops: Vec<Pauli>,
    pub phase: Phase,
}

impl PauliString {
    pub fn identity(l: usize) -> Self {
        PauliString { ops: vec![Pauli::I; l], phase: Phase::ONE }
    }

    /// Single operator `p` on 0-based site `j`.
    pub fn single(l: usize, j: usize, p: Pauli) -> Self {
        let mut s = Self::identity(l);
        s.ops[j] = p;
        s
    }

    /// Build from `(site, Pauli)` pairs, 0-based sites.
    pub fn from_sites(l: usize, sites: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(l);
        for &(j, p) in sites {
            s.ops[j] = p;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|p| **p != Pauli::I).count()
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// Hermitian iff the phase is real.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Mirror site j -> L-1-j.
    pub fn reflect(&self) -> Self {
        let mut ops = self.ops.clone();
        ops.reverse();
        PauliString { ops, phase: self.phase }
    }

    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        let mut k = self.phase.power() + other.phase.power();
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(a, b)| {
                let (dk, p) = a.mul(*b);
                k += dk;
                p
            })
            .collect();
        Ok(PauliString { ops, phase: Phase::from_power(k) })
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .ops
            .iter()
            .zip(&other.ops)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Bit mask of flipped sites; site j is bit j.
    pub fn flip_mask(&self) -> usize {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, p)| p.flips())
            .fold(0, |m, (j, _)| m | (1 << j))
    }

    /// Action on a basis state: P|b> = c |b ^ mask>.  Returns (mask, c).
    pub fn apply_to_basis(&self, b: usize) -> (usize, Complex64) {
        let mut k = self.phase.power();
        let mut mask = 0usize;
        for (j, p) in self.ops.iter().enumerate() {
            let bit = (b >> j) & 1;
            match p {
                Pauli::I => {}
                Pauli::X => mask |= 1 << j,
                Pauli::Y => {
                    mask |= 1 << j;
                    // Y|0> = i|1>, Y|1> = -i|0>
                    k += if bit == 0 { 1 } else { 3 };
                }
                Pauli::Z => {
                    if bit == 1 {
                        k += 2;
                    }
                }
            }
        }
        (mask, Phase::from_power(k).value())
    }

    /// Dense 2^L matrix, site 0 = least significant bit.  Intended for small-L oracles.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let n = 1usize << self.len();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for b in 0..n {
            let (mask, c) = self.apply_to_basis(b);
            m[b ^ mask][b] = c;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase)?;
        for p in &self.ops {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses e.g. `XXZ`, `-iYZ`, `+XI`.
    fn from_str(s: &str) -> Result<Self> {
        let (phase, body) = if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix("+i") {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::ONE, r)
        } else {
            (Phase::ONE, s)
        };
        let ops = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::InvalidParam { name: "pauli", reason: format!("bad symbol {c:?} in {s:?}") }),
            })
            .collect::<Result<Vec<_>>>()?;
        if ops.is_empty() {
            return Err(Error::InvalidParam { name: "pauli", reason: "empty string".into() });
        }
        Ok(PauliString { ops, phase })
    }
}
