//! Open-system engine: a discrete-time dissipative channel on small chains,
//! analytic Pauli-string decay rates, and the Gamma_eff lifetime prediction.
//!
//! Rates follow the continuous generator with dephasing jumps sqrt(gamma_phi/2) Z_j
//! and decay jumps sqrt(gamma_d) sigma^-_j; the time evolution itself is the
//! per-cycle channel, whose probabilities agree with those rates to first order.

pub mod density;
pub mod lifetime;

use serde::{Deserialize, Serialize};

use crate::core::{Pauli, PauliString};
use crate::error::{Error, Result};
use crate::freefermion::{edge_eigenvalue, Sector};

pub use density::{dissipative_channel_step, dissipative_correlator, DensityMatrix, DissipativeCycle, DENSITY_CAP};
pub use lifetime::{lifetime_vs_g, LifetimeOptions, LifetimeRow};

/// Weak-dissipation threshold on the largest per-cycle probability.
pub const WEAK_THRESHOLD: f64 = 0.05;

/// Per-site dephasing and decay probabilities per cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub gamma_phi: Vec<f64>,
    pub gamma_d: Vec<f64>,
}

impl NoiseParams {
    pub fn uniform(l: usize, gamma_phi: f64, gamma_d: f64) -> Self {
        NoiseParams { gamma_phi: vec![gamma_phi; l], gamma_d: vec![gamma_d; l] }
    }

    pub fn noiseless(l: usize) -> Self {
        Self::uniform(l, 0.0, 0.0)
    }

    pub fn len(&self) -> usize {
        self.gamma_phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma_phi.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma_phi.len() != self.gamma_d.len() {
            return Err(Error::LengthMismatch { left: self.gamma_phi.len(), right: self.gamma_d.len() });
        }
        for (name, v) in [("gamma_phi", &self.gamma_phi), ("gamma_d", &self.gamma_d)] {
            if let Some(x) = v.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(Error::InvalidParam { name, reason: format!("{x} outside [0, 1]") });
            }
        }
        Ok(())
    }

    pub fn max_gamma(&self) -> f64 {
        self.gamma_phi.iter().chain(&self.gamma_d).fold(0.0, |a, &b| a.max(b))
    }

    pub fn is_weak(&self) -> bool {
        self.max_gamma() < WEAK_THRESHOLD
    }

    /// Gamma_j = gamma_phi_j + gamma_d_j / 2, the transverse rate of site j.
    pub fn site_rate(&self, j: usize) -> f64 {
        self.gamma_phi[j] + 0.5 * self.gamma_d[j]
    }
}

/// Coefficient of P in -L*_diss[P]: each X or Y site adds Gamma_j, each Z site adds gamma_d_j.
pub fn string_decay_rate(p: &PauliString, noise: &NoiseParams) -> f64 {
    p.ops
        .iter()
        .enumerate()
        .map(|(j, op)| match op {
            Pauli::I => 0.0,
            Pauli::X | Pauli::Y => noise.site_rate(j),
            Pauli::Z => noise.gamma_d[j],
        })
        .sum()
}

/// Exact one-cycle multiplier of P under the channel alone, i.e. D*[P] = f P + (identity parts).
pub fn channel_string_factor(p: &PauliString, noise: &NoiseParams) -> f64 {
    p.ops
        .iter()
        .enumerate()
        .map(|(j, op)| match op {
            Pauli::I => 1.0,
            Pauli::X | Pauli::Y => (1.0 - noise.gamma_phi[j]) * (1.0 - noise.gamma_d[j]).sqrt(),
            Pauli::Z => 1.0 - noise.gamma_d[j],
        })
        .product()
}

/// Sum over Majorana coefficients psi_m^2 times the rate of the string a_m.
///
/// a_{2k-1} = X..X Z_k decays at sum_{i<k} Gamma_i + gamma_d_k, a_{2k} = X..X Y_k at sum_{i<=k} Gamma_i.
pub fn weighted_rate(psi: &[f64], noise: &NoiseParams) -> Result<f64> {
    if psi.len() != 2 * noise.len() {
        return Err(Error::LengthMismatch { left: psi.len(), right: 2 * noise.len() });
    }
    let mut prefix = 0.0;
    let mut acc = 0.0;
    for k in 0..noise.len() {
        acc += psi[2 * k] * psi[2 * k] * (prefix + noise.gamma_d[k]);
        prefix += noise.site_rate(k);
        acc += psi[2 * k + 1] * psi[2 * k + 1] * prefix;
    }
    Ok(acc)
}

/// Closed-form Gamma_eff of the semi-infinite edge mode under uniform noise.
///
/// With q = lambda^2 the two geometric series give
/// u^2 (Gamma q/(1-q) + gamma_d) + v^2 Gamma/(1-q), where (u, v) is the
/// normalized on-site (Z, Y) weight: (sin, cos)(pi g/2) for the pi mode,
/// (cos, sin) for the zero mode.
pub fn gamma_eff(g: f64, j: f64, gamma_phi: f64, gamma_d: f64, sector: Sector) -> Result<f64> {
    let ev = edge_eigenvalue(g, j, sector);
    if !ev.localized {
        return Err(Error::Delocalized(ev.lambda.abs()));
    }
    let q = ev.lambda * ev.lambda;
    let (s, c) = crate::core::sin_cos_pi(g / 2.0);
    let (u2, v2) = match sector {
        Sector::Pi => (s * s, c * c),
        Sector::Zero => (c * c, s * s),
    };
    let big = gamma_phi + 0.5 * gamma_d;
    Ok(u2 * (big * q / (1.0 - q) + gamma_d) + v2 * big / (1.0 - q))
}

/// Gamma_eff truncated at `terms` sites of the series (unnormalized tail dropped).
pub fn gamma_eff_partial(g: f64, j: f64, gamma_phi: f64, gamma_d: f64, sector: Sector, terms: usize) -> Result<f64> {
    let ev = edge_eigenvalue(g, j, sector);
    if !ev.localized {
        return Err(Error::Delocalized(ev.lambda.abs()));
    }
    let q = ev.lambda * ev.lambda;
    let (s, c) = crate::core::sin_cos_pi(g / 2.0);
    let (u2, v2) = match sector {
        Sector::Pi => (s * s, c * c),
        Sector::Zero => (c * c, s * s),
    };
    let big = gamma_phi + 0.5 * gamma_d;
    let c2 = 1.0 - q;
    let mut w = 1.0;
    let mut acc = 0.0;
    for k in 1..=terms {
        acc += w * (u2 * ((k - 1) as f64 * big + gamma_d) + v2 * k as f64 * big);
        w *= q;
    }
    Ok(c2 * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freefermion::{edge_wavefunction, Side};
    use num_complex::Complex64;

    fn dense_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let n = a.len();
        (0..n).map(|r| (0..n).map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum()).collect()).collect()
    }

    fn dagger(a: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let n = a.len();
        (0..n).map(|r| (0..n).map(|c| a[c][r].conj()).collect()).collect()
    }

    /// L*_diss[P] from the jump operators, built densely.
    fn generator_on(p: &PauliString, noise: &NoiseParams) -> Vec<Vec<Complex64>> {
        let l = p.len();
        let n = 1usize << l;
        let pm = p.to_dense();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for j in 0..l {
            let z = PauliString::single(l, j, Pauli::Z).to_dense();
            let deph: Vec<Vec<Complex64>> =
                z.iter().map(|r| r.iter().map(|x| x * (noise.gamma_phi[j] / 2.0).sqrt()).collect()).collect();
            // sigma^- takes bit 0 (up) to bit 1 (down)
            let mut lower = vec![vec![Complex64::new(0.0, 0.0); n]; n];
            for b in 0..n {
                if b & (1 << j) == 0 {
                    lower[b | (1 << j)][b] = Complex64::new(noise.gamma_d[j].sqrt(), 0.0);
                }
            }
            for jump in [deph, lower] {
                let jd = dagger(&jump);
                let sandwich = dense_mul(&dense_mul(&jd, &pm), &jump);
                let ll = dense_mul(&jd, &jump);
                let a = dense_mul(&ll, &pm);
                let b = dense_mul(&pm, &ll);
                for r in 0..n {
                    for c in 0..n {
                        out[r][c] += sandwich[r][c] - (a[r][c] + b[r][c]) * 0.5;
                    }
                }
            }
        }
        out
    }

    fn all_strings(l: usize, max_weight: usize) -> Vec<PauliString> {
        let ops = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        (0..4usize.pow(l as u32))
            .map(|mut k| {
                let mut p = PauliString::identity(l);
                for j in 0..l {
                    p.ops[j] = ops[k % 4];
                    k /= 4;
                }
                p
            })
            .filter(|p| p.weight() >= 1 && p.weight() <= max_weight)
            .collect()
    }

    #[test]
    fn single_site_examples() {
        let n = NoiseParams::uniform(3, 0.01, 0.004);
        assert_eq!(string_decay_rate(&"ZII".parse().unwrap(), &n), 0.004);
        assert!((string_decay_rate(&"YII".parse().unwrap(), &n) - 0.012).abs() < 1e-15);
        assert!((string_decay_rate(&"XXZ".parse().unwrap(), &n) - (2.0 * 0.012 + 0.004)).abs() < 1e-15);
    }

    #[test]
    fn rates_match_generator_brute_force() {
        for l in 1..=4 {
            let noise = NoiseParams {
                gamma_phi: (0..l).map(|j| 0.01 + 0.003 * j as f64).collect(),
                gamma_d: (0..l).map(|j| 0.005 + 0.002 * j as f64).collect(),
            };
            let dim = (1usize << l) as f64;
            for p in all_strings(l, 3) {
                let gen = generator_on(&p, &noise);
                let proj: Complex64 = dense_mul(&p.to_dense(), &gen).iter().enumerate().map(|(i, r)| r[i]).sum();
                let rate = -proj.re / dim;
                assert!((rate - string_decay_rate(&p, &noise)).abs() < 1e-10, "{p}");
                assert!(proj.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn channel_factor_is_first_order_rate() {
        let n = NoiseParams::uniform(3, 1e-4, 2e-4);
        for s in ["XYZ", "ZII", "IYX"] {
            let p: PauliString = s.parse().unwrap();
            let f = channel_string_factor(&p, &n);
            assert!((-f.ln() - string_decay_rate(&p, &n)).abs() < 1e-7);
        }
    }

    #[test]
    fn closed_form_special_point() {
        assert!((gamma_eff(1.0, 0.5, 0.01, 0.0046, Sector::Pi).unwrap() - 0.0046).abs() < 1e-15);
        let v = gamma_eff(0.8, 0.5, 0.01, 0.0046, Sector::Pi).unwrap();
        assert!((v - 0.006787).abs() < 1e-6);
        assert!(matches!(gamma_eff(0.4, 0.5, 0.01, 0.0, Sector::Pi), Err(Error::Delocalized(_))));
    }

    #[test]
    fn partial_sums_converge() {
        let a = gamma_eff(0.6, 0.5, 0.01, 0.0046, Sector::Pi).unwrap();
        let b = gamma_eff_partial(0.6, 0.5, 0.01, 0.0046, Sector::Pi, 200).unwrap();
        assert!((a - b).abs() < 1e-12);
        let a = gamma_eff(0.2, 0.5, 0.02, 0.001, Sector::Zero).unwrap();
        let b = gamma_eff_partial(0.2, 0.5, 0.02, 0.001, Sector::Zero, 200).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn closed_form_equals_weighted_string_sum() {
        let l = 60;
        let noise = NoiseParams::uniform(l, 0.01, 0.0046);
        for g in [0.7, 0.8, 0.9] {
            let mode = edge_wavefunction(g, 0.5, Sector::Pi, Side::Left, l).unwrap();
            let term_by_term: f64 = mode
                .psi
                .iter()
                .enumerate()
                .map(|(m, a)| {
                    let s = crate::core::majorana_to_pauli(m + 1, l).unwrap();
                    a * a * string_decay_rate(&s, &noise)
                })
                .sum();
            assert!((term_by_term - weighted_rate(&mode.psi, &noise).unwrap()).abs() < 1e-14);
            let closed = gamma_eff(g, 0.5, 0.01, 0.0046, Sector::Pi).unwrap();
            assert!((term_by_term - closed).abs() < 1e-10, "g={g}");
        }
    }

    #[test]
    fn validation() {
        assert!(NoiseParams::uniform(3, 0.01, 0.0046).validate().is_ok());
        assert!(NoiseParams::uniform(3, 0.01, 0.0046).is_weak());
        assert!(!NoiseParams::uniform(3, 0.2, 0.0).is_weak());
        assert!(NoiseParams::uniform(3, -0.1, 0.0).validate().is_err());
        assert!(NoiseParams::uniform(3, 0.0, 1.5).validate().is_err());
        let bad = NoiseParams { gamma_phi: vec![0.0; 3], gamma_d: vec![0.0; 2] };
        assert!(bad.validate().is_err());
    }
}
