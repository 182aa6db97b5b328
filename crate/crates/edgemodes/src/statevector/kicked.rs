use num_complex::Complex64;

use super::{check_size, measure_pauli, StateVector};
use crate::core::{sin_cos_pi, BitString, ChainParams, PauliString, Variant};
use crate::error::{Error, Result};

/// One kicked-Ising cycle: an X-rotation layer followed by a diagonal phase
/// layer holding the ZZ couplings and the Z fields.
#[derive(Debug, Clone, PartialEq)]
pub struct KickedIsingCycle {
    pub l: usize,
    /// (cos, sin) of half the rotation angle of exp(-i pi g_j/2 X_j); None skips the site.
    kicks: Vec<Option<(f64, f64)>>,
    diag: Vec<Complex64>,
}

impl KickedIsingCycle {
    pub fn new(params: &ChainParams) -> Result<Self> {
        params.validate()?;
        if params.variant != Variant::KickedIsing {
            return Err(Error::VariantMismatch("KickedIsing"));
        }
        check_size(params.l)?;
        let kicks = vec![Some(params.g); params.l];
        Ok(Self::custom(params.l, &kicks, ising_diagonal(params.l, params.j, &params.h)))
    }

    /// Arbitrary per-site kicks (in units of pi, as g) and diagonal layer.
    pub fn custom(l: usize, kicks: &[Option<f64>], diag: Vec<Complex64>) -> Self {
        assert_eq!(kicks.len(), l);
        assert_eq!(diag.len(), 1 << l);
        let kicks = kicks.iter().map(|k| k.map(|g| {
            let (s, c) = sin_cos_pi(g / 2.0);
            (c, s)
        }));
        KickedIsingCycle { l, kicks: kicks.collect(), diag }
    }

    pub fn apply(&self, state: &mut StateVector) {
        debug_assert_eq!(state.l, self.l);
        self.apply_amps(&mut state.amps);
    }

    /// Same as `apply` on a bare amplitude slice of length 2^L.
    pub fn apply_amps(&self, amps: &mut [Complex64]) {
        for (j, k) in self.kicks.iter().enumerate() {
            let Some((c, s)) = *k else { continue };
            let bit = 1usize << j;
            let ms = Complex64::new(0.0, -s);
            for b in 0..amps.len() {
                if b & bit == 0 {
                    let (a0, a1) = (amps[b], amps[b | bit]);
                    amps[b] = a0 * c + a1 * ms;
                    amps[b | bit] = a0 * ms + a1 * c;
                }
            }
        }
        amps.iter_mut().zip(&self.diag).for_each(|(a, d)| *a *= d);
    }
}

/// exp(-i pi J/2 sum Z_j Z_{j+1}) exp(-i/2 sum h_j Z_j) on every basis state.
pub fn ising_diagonal(l: usize, j: f64, h: &[f64]) -> Vec<Complex64> {
    let half_j = std::f64::consts::PI * j / 2.0;
    (0..1usize << l)
        .map(|b| {
            let z = |k: usize| if (b >> k) & 1 == 0 { 1.0 } else { -1.0 };
            let zz: f64 = (0..l - 1).map(|k| z(k) * z(k + 1)).sum();
            let hz: f64 = (0..l).map(|k| h[k] * z(k)).sum();
            Complex64::from_polar(1.0, -(half_j * zz + 0.5 * hz))
        })
        .collect()
}

pub fn apply_kicked_ising_cycle(state: &mut StateVector, params: &ChainParams) -> Result<()> {
    if state.l != params.l {
        return Err(Error::LengthMismatch { left: state.l, right: params.l });
    }
    KickedIsingCycle::new(params)?.apply(state);
    Ok(())
}

/// <Z_j(t)> for every site, rows t = 0..t_len-1.
pub fn z_trajectory(params: &ChainParams, psi0: &BitString, t_len: usize) -> Result<Vec<Vec<f64>>> {
    let cycle = KickedIsingCycle::new(params)?;
    let mut s = StateVector::from_bitstring(psi0)?;
    let mut out = Vec::with_capacity(t_len);
    for t in 0..t_len {
        if t > 0 {
            cycle.apply(&mut s);
        }
        out.push((0..params.l).map(|j| s.z(j)).collect());
    }
    Ok(out)
}

/// z_1 <O_k(t)> = <Z_1(0) O_k(t)> on a bitstring, rows t, one column per operator.
pub fn z_autocorrelator(
    params: &ChainParams,
    psi0: &BitString,
    ops: &[PauliString],
    t_len: usize,
) -> Result<Vec<Vec<f64>>> {
    let cycle = KickedIsingCycle::new(params)?;
    let mut s = StateVector::from_bitstring(psi0)?;
    let z1 = psi0.z(0);
    let mut out = Vec::with_capacity(t_len);
    for t in 0..t_len {
        if t > 0 {
            cycle.apply(&mut s);
        }
        let row: Result<Vec<f64>> = ops.iter().map(|o| measure_pauli(&s, o).map(|x| z1 * x)).collect();
        out.push(row?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{majorana_to_pauli, Pauli, RngSpec};
    use crate::freefermion::heisenberg_correlator;

    #[test]
    fn identity_circuit() {
        let p = ChainParams::kicked_ising(3, 0.0, 0.0);
        let mut s = StateVector::basis(3, 5).unwrap();
        apply_kicked_ising_cycle(&mut s, &p).unwrap();
        assert_eq!(s, StateVector::basis(3, 5).unwrap());
    }

    #[test]
    fn exact_pi_pulses() {
        let l = 5;
        let p = ChainParams::kicked_ising(l, 1.0, 0.0);
        let mut s = StateVector::zeros(l).unwrap();
        apply_kicked_ising_cycle(&mut s, &p).unwrap();
        let expect = Complex64::new(0.0, -1.0).powu(l as u32);
        assert!((s.amps[(1 << l) - 1] - expect).norm() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_xy_and_length() {
        let mut s = StateVector::zeros(3).unwrap();
        assert!(apply_kicked_ising_cycle(&mut s, &ChainParams::xy(3, 1.0)).is_err());
        assert!(apply_kicked_ising_cycle(&mut s, &ChainParams::kicked_ising(4, 0.8, 0.5)).is_err());
    }

    #[test]
    fn norm_after_many_cycles() {
        let h = crate::core::sample_disorder(0.3, 12, RngSpec::new(2));
        let p = ChainParams::kicked_ising(12, 0.77, 0.5).with_h(h);
        let c = KickedIsingCycle::new(&p).unwrap();
        let mut s = StateVector::basis(12, 0b1011_0010_0110).unwrap();
        for _ in 0..1000 {
            c.apply(&mut s);
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn z2_symmetry_at_zero_field() {
        let l = 8;
        let p = ChainParams::kicked_ising(l, 0.63, 0.5);
        let c = KickedIsingCycle::new(&p).unwrap();
        let sx = PauliString::from_sites(l, &(0..l).map(|j| (j, Pauli::X)).collect::<Vec<_>>());
        let mut rng = RngSpec::new(4).rng();
        use rand::Rng;
        let amps: Vec<Complex64> = (0..1 << l).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
        let s = StateVector::from_amplitudes(l, amps).unwrap();
        let mut a = s.apply_pauli(&sx).unwrap();
        c.apply(&mut a);
        let mut b = s.clone();
        c.apply(&mut b);
        let b = b.apply_pauli(&sx).unwrap();
        let diff: f64 = a.amps.iter().zip(&b.amps).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        assert!(diff < 1e-10);
    }

    #[test]
    fn matches_free_fermions() {
        let l = 6;
        let p = ChainParams::kicked_ising(l, 0.75, 0.5);
        let b = BitString::from_index(0b010011, l);
        let ops: Vec<PauliString> = vec![
            PauliString::single(l, 0, Pauli::Z),
            PauliString::single(l, 3, Pauli::Z),
            majorana_to_pauli(4, l).unwrap(),
            majorana_to_pauli(7, l).unwrap(),
            PauliString::from_sites(l, &[(1, Pauli::X)]),
        ];
        let sv = z_autocorrelator(&p, &b, &ops, 60).unwrap();
        for (k, o) in ops.iter().enumerate() {
            let ff = heisenberg_correlator(&p, &b, o, 60).unwrap();
            for t in 0..60 {
                assert!((sv[t][k] - ff[t]).abs() < 1e-10, "{o} t={t}: {} vs {}", sv[t][k], ff[t]);
            }
        }
    }
}
