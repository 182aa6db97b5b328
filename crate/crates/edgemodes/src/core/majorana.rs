//! Jordan-Wigner bookkeeping.
//!
//! a_{2j-1} = X_1..X_{j-1} Z_j and a_{2j} = X_1..X_{j-1} Y_j (1-based).

use serde::{Deserialize, Serialize};

use super::pauli::{Pauli, PauliString, Phase};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    /// a_{2j-1}, ending in Z_j.
    Z,
    /// a_{2j}, ending in Y_j.
    Y,
}

/// (1-based site, parity) -> 1-based Majorana index.
pub fn majorana_index(site: usize, parity: Parity) -> usize {
    match parity {
        Parity::Z => 2 * site - 1,
        Parity::Y => 2 * site,
    }
}

/// 1-based Majorana index -> (1-based site, parity).
pub fn majorana_site(m: usize) -> (usize, Parity) {
    if m % 2 == 1 {
        ((m + 1) / 2, Parity::Z)
    } else {
        (m / 2, Parity::Y)
    }
}

pub fn majorana_to_pauli(m: usize, l: usize) -> Result<PauliString> {
    if m == 0 || m > 2 * l {
        return Err(Error::MajoranaIndex { m, max: 2 * l });
    }
    let (site, parity) = majorana_site(m);
    let mut p = PauliString::identity(l);
    for j in 0..site - 1 {
        p.ops[j] = Pauli::X;
    }
    p.ops[site - 1] = match parity {
        Parity::Z => Pauli::Z,
        Parity::Y => Pauli::Y,
    };
    Ok(p)
}

/// Product `phase * a_{m_1} a_{m_2} ...` with strictly increasing 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajoranaMonomial {
    pub indices: Vec<usize>,
    pub phase: Phase,
}

impl MajoranaMonomial {
    pub fn is_odd(&self) -> bool {
        self.indices.len() % 2 == 1
    }

    pub fn to_pauli(&self, l: usize) -> Result<PauliString> {
        let mut p = PauliString::identity(l).with_phase(self.phase);
        for &m in &self.indices {
            p = p.multiply(&majorana_to_pauli(m, l)?)?;
        }
        Ok(p)
    }
}

/// Inverse Jordan-Wigner map: every Pauli string is a phase times an ordered
/// Majorana monomial.  Sites are peeled off from the right, where only
/// a_{2L-1} and a_{2L} act.
pub fn pauli_to_majorana(p: &PauliString) -> MajoranaMonomial {
    let l = p.len();
    let mut residual = p.clone();
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(l);
    for site in (1..=l).rev() {
        let zi = majorana_index(site, Parity::Z);
        let yi = majorana_index(site, Parity::Y);
        let block = match residual.ops[site - 1] {
            Pauli::I => vec![],
            Pauli::Z => vec![zi],
            Pauli::Y => vec![yi],
            Pauli::X => vec![zi, yi],
        };
        // residual <- residual * block^dagger, block^dagger = reversed product
        for &m in block.iter().rev() {
            let a = majorana_to_pauli(m, l).expect("index in range");
            residual = residual.multiply(&a).expect("same length");
        }
        blocks.push(block);
    }
    debug_assert!(residual.ops.iter().all(|o| *o == Pauli::I));
    blocks.reverse();
    MajoranaMonomial { indices: blocks.into_iter().flatten().collect(), phase: residual.phase }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(majorana_to_pauli(1, 3).unwrap(), "ZII".parse().unwrap());
        assert_eq!(majorana_to_pauli(2, 3).unwrap(), "YII".parse().unwrap());
        assert_eq!(majorana_to_pauli(5, 4).unwrap(), "XXZI".parse().unwrap());
        assert!(matches!(majorana_to_pauli(0, 2), Err(Error::MajoranaIndex { .. })));
        assert!(matches!(majorana_to_pauli(5, 2), Err(Error::MajoranaIndex { .. })));
    }

    #[test]
    fn clifford_algebra() {
        for l in 2..=6 {
            for m in 1..=2 * l {
                let a = majorana_to_pauli(m, l).unwrap();
                assert_eq!(a.multiply(&a).unwrap(), PauliString::identity(l));
                for n in m + 1..=2 * l {
                    let b = majorana_to_pauli(n, l).unwrap();
                    assert!(!a.commutes_with(&b), "a{m} a{n}");
                }
            }
        }
    }

    #[test]
    fn index_round_trip() {
        for l in 2..=12 {
            for m in 1..=2 * l {
                let (s, par) = majorana_site(m);
                assert_eq!(majorana_index(s, par), m);
                let mono = pauli_to_majorana(&majorana_to_pauli(m, l).unwrap());
                assert_eq!(mono.indices, vec![m]);
                assert_eq!(mono.phase, Phase::ONE);
            }
        }
    }

    #[test]
    fn bilinears() {
        // X_j = i a_{2j-1} a_{2j};  Z_j Z_{j+1} = i a_{2j} a_{2j+1}
        let x2: PauliString = "IXI".parse().unwrap();
        let mono = pauli_to_majorana(&x2);
        assert_eq!(mono.indices, vec![3, 4]);
        assert_eq!(mono.phase, Phase::I);
        let zz: PauliString = "ZZI".parse().unwrap();
        let mono = pauli_to_majorana(&zz);
        assert_eq!(mono.indices, vec![2, 3]);
        assert_eq!(mono.phase, Phase::I);
    }
}
