use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;

use super::NoiseParams;
use crate::core::{BitString, ChainParams, PauliString, Variant};
use crate::error::{Error, Result};
use crate::spectroscopy::TimeSeries;
use crate::statevector::{KickedIsingCycle, StateVector, XyCycle};

/// Largest chain for density-matrix evolution (4^10 entries).
pub const DENSITY_CAP: usize = 10;

/// Dense 2^L x 2^L operator, stored by columns; bit j of an index is site j.
///
/// Also carries non-Hermitian operators such as O rho, which the correlator evolves.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub l: usize,
    data: Vec<Complex64>,
}

fn check_cap(l: usize) -> Result<()> {
    if l > DENSITY_CAP {
        return Err(Error::SizeLimit { l, cap: DENSITY_CAP, engine: "density matrix" });
    }
    if l == 0 {
        return Err(Error::InvalidParam { name: "L", reason: "empty chain".into() });
    }
    Ok(())
}

impl DensityMatrix {
    pub fn zeros(l: usize) -> Result<Self> {
        check_cap(l)?;
        let n = 1usize << l;
        Ok(DensityMatrix { l, data: vec![Complex64::new(0.0, 0.0); n * n] })
    }

    pub fn maximally_mixed(l: usize) -> Result<Self> {
        let mut m = Self::zeros(l)?;
        let n = m.dim();
        for a in 0..n {
            m.set(a, a, Complex64::new(1.0 / n as f64, 0.0));
        }
        Ok(m)
    }

    pub fn from_bitstring(b: &BitString) -> Result<Self> {
        let mut m = Self::zeros(b.len())?;
        m.set(b.index(), b.index(), Complex64::new(1.0, 0.0));
        Ok(m)
    }

    /// |psi><psi|.
    pub fn from_state(s: &StateVector) -> Result<Self> {
        let mut m = Self::zeros(s.l)?;
        let n = m.dim();
        for c in 0..n {
            for r in 0..n {
                m.data[c * n + r] = s.amps[r] * s.amps[c].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        1 << self.l
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[c * self.dim() + r]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        let n = self.dim();
        self.data[c * n + r] = v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|a| self.get(a, a)).sum()
    }

    /// max |rho - rho^dag| over entries.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut err: f64 = 0.0;
        for c in 0..n {
            for r in 0..=c {
                err = err.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        err
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.dim();
        let m = Mat::<c64>::from_fn(n, n, |r, c| {
            let z = (self.get(r, c) + self.get(c, r).conj()) * 0.5;
            c64::new(z.re, z.im)
        });
        m.selfadjoint_eigenvalues(faer::Side::Lower).into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Tr(P rho) = sum_b ph(b) rho[b, b ^ mask], where P|b> = ph(b)|b ^ mask>.
    pub fn expectation(&self, p: &PauliString) -> Result<Complex64> {
        if p.len() != self.l {
            return Err(Error::LengthMismatch { left: p.len(), right: self.l });
        }
        Ok((0..self.dim())
            .map(|b| {
                let (mask, ph) = p.apply_to_basis(b);
                ph * self.get(b, b ^ mask)
            })
            .sum())
    }

    /// P rho.
    pub fn left_multiply(&self, p: &PauliString) -> Result<Self> {
        if p.len() != self.l {
            return Err(Error::LengthMismatch { left: p.len(), right: self.l });
        }
        let n = self.dim();
        let mut out = Self::zeros(self.l)?;
        for r in 0..n {
            let (mask, ph) = p.apply_to_basis(r);
            for c in 0..n {
                out.data[c * n + (r ^ mask)] = ph * self.data[c * n + r];
            }
        }
        Ok(out)
    }

    fn conj_transpose_in_place(&mut self) {
        let n = self.dim();
        for c in 0..n {
            self.data[c * n + c] = self.data[c * n + c].conj();
            for r in 0..c {
                let (i, k) = (c * n + r, r * n + c);
                let (x, y) = (self.data[i], self.data[k]);
                self.data[i] = y.conj();
                self.data[k] = x.conj();
            }
        }
    }

    /// rho -> U rho U^dag with U given by its action on amplitude vectors.
    fn conjugate_by(&mut self, apply: impl Fn(&mut [Complex64])) {
        let n = self.dim();
        for _ in 0..2 {
            self.data.chunks_mut(n).for_each(&apply);
            self.conj_transpose_in_place();
        }
    }

    /// The product of single-site maps D_j, with up = bit 0 (Z = +1):
    /// rho_00 -> (1 - gd) rho_00, rho_11 += gd rho_00, coherences x (1 - gphi) sqrt(1 - gd).
    pub fn apply_dissipation(&mut self, noise: &NoiseParams) -> Result<()> {
        if noise.len() != self.l {
            return Err(Error::LengthMismatch { left: noise.len(), right: self.l });
        }
        let n = self.dim();
        for j in 0..self.l {
            let (gphi, gd) = (noise.gamma_phi[j], noise.gamma_d[j]);
            if gphi == 0.0 && gd == 0.0 {
                continue;
            }
            let off = (1.0 - gphi) * (1.0 - gd).sqrt();
            let bit = 1usize << j;
            for c in 0..n {
                if c & bit != 0 {
                    continue;
                }
                for r in 0..n {
                    if r & bit != 0 {
                        continue;
                    }
                    let p00 = self.data[c * n + r];
                    self.data[c * n + r] = p00 * (1.0 - gd);
                    self.data[(c | bit) * n + (r | bit)] += p00 * gd;
                    self.data[(c | bit) * n + r] *= off;
                    self.data[c * n + (r | bit)] *= off;
                }
            }
        }
        Ok(())
    }
}

/// One Floquet cycle followed by the local channel, prepared once for repeated use.
#[derive(Debug, Clone)]
pub struct DissipativeCycle {
    l: usize,
    unitary: Unitary,
    noise: NoiseParams,
}

#[derive(Debug, Clone)]
enum Unitary {
    Kicked(KickedIsingCycle),
    Xy(XyCycle),
}

impl DissipativeCycle {
    pub fn new(params: &ChainParams, noise: &NoiseParams) -> Result<Self> {
        params.validate()?;
        noise.validate()?;
        check_cap(params.l)?;
        if noise.len() != params.l {
            return Err(Error::LengthMismatch { left: noise.len(), right: params.l });
        }
        let unitary = match params.variant {
            Variant::KickedIsing => Unitary::Kicked(KickedIsingCycle::new(params)?),
            Variant::XyModel { .. } => Unitary::Xy(XyCycle::new(params)?),
        };
        Ok(DissipativeCycle { l: params.l, unitary, noise: noise.clone() })
    }

    pub fn apply(&self, rho: &mut DensityMatrix) -> Result<()> {
        if rho.l != self.l {
            return Err(Error::LengthMismatch { left: rho.l, right: self.l });
        }
        match &self.unitary {
            Unitary::Kicked(c) => rho.conjugate_by(|v| c.apply_amps(v)),
            Unitary::Xy(c) => rho.conjugate_by(|v| c.apply_amps(v)),
        }
        rho.apply_dissipation(&self.noise)
    }
}

/// rho -> (prod_j D_j)[U rho U^dag].
pub fn dissipative_channel_step(rho: &DensityMatrix, params: &ChainParams, noise: &NoiseParams) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    DissipativeCycle::new(params, noise)?.apply(&mut out)?;
    Ok(out)
}

/// Tr(O_k C^t[A rho0]) for every probe O_k, t = 0..t_len-1.
///
/// With A = Z_1 and rho0 a bitstring projector this is the noisy version of
/// <Z_1(0) O_k(t)>; with rho0 maximally mixed it is the infinite-temperature one.
pub fn dissipative_correlator(
    probes: &[PauliString],
    init: &PauliString,
    rho0: &DensityMatrix,
    params: &ChainParams,
    noise: &NoiseParams,
    t_len: usize,
) -> Result<Vec<TimeSeries>> {
    let cycle = DissipativeCycle::new(params, noise)?;
    let mut x = rho0.left_multiply(init)?;
    let mut out: Vec<Vec<Complex64>> = vec![Vec::with_capacity(t_len); probes.len()];
    for t in 0..t_len {
        if t > 0 {
            cycle.apply(&mut x)?;
        }
        for (row, p) in out.iter_mut().zip(probes) {
            row.push(x.expectation(p)?);
        }
    }
    Ok(probes.iter().zip(out).map(|(p, v)| TimeSeries::complex(p.to_string(), v)).collect())
}
