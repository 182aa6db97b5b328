//! Free-fermion correlators on computational-basis initial states.
//!
//! A bitstring b is not Gaussian in the Majoranas because Z_1 = a_1 is linear.
//! It factorizes as rho_b = (1 + z_1 a_1) rho_G, where rho_G is the Gaussian
//! state fixed by the bond parities Z_j Z_{j+1} = i a_{2j} a_{2j+1}.  Hence
//! <O>_b = <O>_G for even O and <O>_b = z_1 <O a_1>_G for odd O, and both are
//! Pfaffians of two-point functions.

use num_complex::Complex64;

use super::floquet::SingleParticleFloquet;
use super::pfaffian::pfaffian;
use crate::core::{pauli_to_majorana, BitString, ChainParams, PauliString};
use crate::error::{Error, Result};

/// Gaussian part of a bitstring state: <a_p a_q>_G = delta_pq + i Gamma_pq.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBitstring {
    pub l: usize,
    pub z1: f64,
    /// w_s = z_s z_{s+1}; Gamma[2s+1][2s+2] = -w_s (0-based Majorana indices).
    pub bond_parity: Vec<f64>,
}

impl GaussianBitstring {
    pub fn new(b: &BitString) -> Self {
        let l = b.len();
        GaussianBitstring { l, z1: b.z(0), bond_parity: (0..l - 1).map(|s| b.z(s) * b.z(s + 1)).collect() }
    }

    fn gamma_times(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; 2 * self.l];
        for (s, &w) in self.bond_parity.iter().enumerate() {
            let (p, q) = (2 * s + 1, 2 * s + 2);
            out[p] -= w * v[q];
            out[q] += w * v[p];
        }
        out
    }

    /// <(u.a)(v.a)>_G for real coefficient vectors.
    pub fn two_point(&self, u: &[f64], v: &[f64]) -> Complex64 {
        let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
        let gv = self.gamma_times(v);
        let cross: f64 = u.iter().zip(&gv).map(|(a, b)| a * b).sum();
        Complex64::new(dot, cross)
    }

    /// <b_1 b_2 ... b_k>_G for linear Majorana combinations b_i = u_i . a.
    pub fn product(&self, us: &[Vec<f64>]) -> Complex64 {
        let n = us.len();
        if n == 0 {
            return Complex64::new(1.0, 0.0);
        }
        if n % 2 == 1 {
            return Complex64::new(0.0, 0.0);
        }
        let mut m = vec![Complex64::new(0.0, 0.0); n * n];
        for p in 0..n {
            for q in p + 1..n {
                let x = self.two_point(&us[p], &us[q]);
                m[p * n + q] = x;
                m[q * n + p] = -x;
            }
        }
        pfaffian(&m, n)
    }

    /// <phase * b_1 ... b_k> in the full bitstring state.
    pub fn expectation(&self, phase: Complex64, us: &[Vec<f64>]) -> Complex64 {
        if us.len() % 2 == 0 {
            phase * self.product(us)
        } else {
            let mut e1 = vec![0.0; 2 * self.l];
            e1[0] = 1.0;
            let mut all = us.to_vec();
            all.push(e1);
            phase * self.z1 * self.product(&all)
        }
    }
}

/// <psi0| Z_1(0) O(t) |psi0> = z_1 <O(t)> for t = 0..t_len-1, via Heisenberg
/// evolution of the Majorana factors of O.  Cost O(t_len (k L + k^3)) for a
/// degree-k monomial.
pub fn heisenberg_correlator(
    params: &ChainParams,
    psi0: &BitString,
    o: &PauliString,
    t_len: usize,
) -> Result<Vec<f64>> {
    let f = SingleParticleFloquet::new(params)?;
    if psi0.len() != params.l {
        return Err(Error::LengthMismatch { left: psi0.len(), right: params.l });
    }
    if o.len() != params.l {
        return Err(Error::LengthMismatch { left: o.len(), right: params.l });
    }
    if !o.is_hermitian() {
        return Err(Error::NonHermitian(o.phase.to_string()));
    }
    let mono = pauli_to_majorana(o);
    let state = GaussianBitstring::new(psi0);
    let n = 2 * params.l;
    let mut us: Vec<Vec<f64>> = mono
        .indices
        .iter()
        .map(|&m| {
            let mut v = vec![0.0; n];
            v[m - 1] = 1.0;
            v
        })
        .collect();
    let phase = mono.phase.value();
    let mut out = Vec::with_capacity(t_len);
    for t in 0..t_len {
        if t > 0 {
            us.iter_mut().for_each(|u| f.apply(u));
        }
        out.push(state.z1 * state.expectation(phase, &us).re);
    }
    Ok(out)
}

/// C[t][m-1] = <Z_1(0) a_m(t)> = (R^t e_m)_1 on any bitstring, for all m at once.
/// The rows follow from evolving e_1 under R^T.
pub fn majorana_autocorrelator(f: &SingleParticleFloquet, t_len: usize) -> Vec<Vec<f64>> {
    let mut v = vec![0.0; f.dim()];
    v[0] = 1.0;
    let mut out = Vec::with_capacity(t_len);
    for t in 0..t_len {
        if t > 0 {
            f.apply_transpose(&mut v);
        }
        out.push(v.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Pauli, RngSpec};

    #[test]
    fn equal_time_bitstring_values() {
        let l = 5;
        let mut rng = RngSpec::new(9).rng();
        for _ in 0..20 {
            let b = BitString::random(l, &mut rng);
            let p = ChainParams::kicked_ising(l, 0.7, 0.5);
            for j in 0..l {
                let z = PauliString::single(l, j, Pauli::Z);
                let c = heisenberg_correlator(&p, &b, &z, 1).unwrap()[0];
                assert!((c - b.z(0) * b.z(j)).abs() < 1e-13, "Z_{j}");
                let x = PauliString::single(l, j, Pauli::X);
                assert!(heisenberg_correlator(&p, &b, &x, 1).unwrap()[0].abs() < 1e-13);
            }
            let zz = PauliString::from_sites(l, &[(1, Pauli::Z), (2, Pauli::Z)]);
            let c = heisenberg_correlator(&p, &b, &zz, 1).unwrap()[0];
            assert!((c - b.z(0) * b.z(1) * b.z(2)).abs() < 1e-13);
        }
    }

    #[test]
    fn decoupled_point_flips_each_cycle() {
        let p = ChainParams::kicked_ising(4, 1.0, 0.5);
        let c = heisenberg_correlator(&p, &BitString::zeros(4), &PauliString::single(4, 0, Pauli::Z), 6).unwrap();
        for (t, x) in c.iter().enumerate() {
            assert!((x - if t % 2 == 0 { 1.0 } else { -1.0 }).abs() < 1e-13);
        }
    }

    #[test]
    fn single_majorana_matches_table() {
        let p = ChainParams::kicked_ising(6, 0.8, 0.5);
        let f = SingleParticleFloquet::new(&p).unwrap();
        let table = majorana_autocorrelator(&f, 30);
        let b = BitString::from_index(0b101101, 6);
        for m in [1, 2, 3, 6, 9] {
            let op = crate::core::majorana_to_pauli(m, 6).unwrap();
            let c = heisenberg_correlator(&p, &b, &op, 30).unwrap();
            for t in 0..30 {
                assert!((c[t] - table[t][m - 1]).abs() < 1e-12, "m {m} t {t}");
            }
        }
    }

    #[test]
    fn rejects_non_hermitian_and_fields() {
        let p = ChainParams::kicked_ising(3, 0.8, 0.5);
        let bad = PauliString::single(3, 0, Pauli::Z).with_phase(crate::core::Phase::I);
        assert!(heisenberg_correlator(&p, &BitString::zeros(3), &bad, 2).is_err());
        let ph = p.with_uniform_h(0.1);
        assert!(heisenberg_correlator(&ph, &BitString::zeros(3), &PauliString::identity(3), 2).is_err());
    }
}
