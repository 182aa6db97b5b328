use serde::{Deserialize, Serialize};

use super::{dissipative_correlator, gamma_eff, DensityMatrix, NoiseParams};
use crate::core::{ChainParams, Pauli, PauliString};
use crate::freefermion::Sector;
use crate::spectroscopy::envelope_log_slope;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifetimeOptions {
    pub t_len: usize,
    /// Fit window [fit_from, t_len) for the log-slope of the |<Z_1(0) Z_1(t)>| envelope.
    pub fit_from: usize,
}

impl Default for LifetimeOptions {
    fn default() -> Self {
        LifetimeOptions { t_len: 400, fit_from: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifetimeRow {
    pub g: f64,
    /// Fitted late-time decay rate per cycle.
    pub rate: f64,
    /// 1 / rate.
    pub t_m: f64,
    /// Closed-form prediction, absent when the pi mode is delocalized or the noise is not uniform.
    pub gamma_eff: Option<f64>,
    pub error: Option<String>,
}

/// T_M(g) from the infinite-temperature Z_1 autocorrelator of the dissipative chain.
///
/// `template` fixes L, J, h and the variant; g is overwritten per point.
pub fn lifetime_vs_g(g_grid: &[f64], template: &ChainParams, noise: &NoiseParams, opts: LifetimeOptions) -> Vec<LifetimeRow> {
    let l = template.l;
    let z1 = PauliString::single(l, 0, Pauli::Z);
    let uniform = noise.gamma_phi.windows(2).all(|w| w[0] == w[1]) && noise.gamma_d.windows(2).all(|w| w[0] == w[1]);
    g_grid
        .iter()
        .map(|&g| {
            let params = ChainParams { g, ..template.clone() };
            let theory = if uniform && !noise.is_empty() {
                gamma_eff(g, params.j, noise.gamma_phi[0], noise.gamma_d[0], Sector::Pi).ok()
            } else {
                None
            };
            let series = DensityMatrix::maximally_mixed(l)
                .and_then(|rho| dissipative_correlator(std::slice::from_ref(&z1), &z1, &rho, &params, noise, opts.t_len));
            match series {
                Ok(s) => {
                    let rate = -envelope_log_slope(&s[0].re(), opts.fit_from, opts.t_len);
                    let error = (!rate.is_finite()).then(|| "non-finite log-slope".to_string());
                    LifetimeRow { g, rate, t_m: 1.0 / rate, gamma_eff: theory, error }
                }
                Err(e) => LifetimeRow { g, rate: f64::NAN, t_m: f64::NAN, gamma_eff: theory, error: Some(e.to_string()) },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_system_limit() {
        let p = ChainParams::kicked_ising(8, 0.9, 0.5);
        let rows = lifetime_vs_g(&[0.9], &p, &NoiseParams::noiseless(8), LifetimeOptions { t_len: 1000, fit_from: 100 });
        assert!(rows[0].rate.abs() < 1e-6, "{:?}", rows[0]);
    }

    #[test]
    fn lifetime_grows_with_g() {
        let l = 8;
        let p = ChainParams::kicked_ising(l, 0.8, 0.5);
        let noise = NoiseParams::uniform(l, 0.01, 0.0046);
        let rows = lifetime_vs_g(&[0.6, 0.7, 0.8, 0.9, 0.95], &p, &noise, LifetimeOptions::default());
        for w in rows.windows(2) {
            assert!(w[1].t_m > w[0].t_m, "{:?}", rows);
        }
        // below g = 0.7 the finite-size splitting at L = 8 beats against the decay
        for r in &rows[1..] {
            assert!(r.error.is_none());
            let th = r.gamma_eff.unwrap();
            assert!((r.rate - th).abs() < 5.0 * 0.01f64.powi(2), "{:?}", r);
        }
    }

    #[test]
    fn failure_is_flagged_per_point() {
        let p = ChainParams::kicked_ising(11, 0.8, 0.5);
        let rows = lifetime_vs_g(&[0.8], &p, &NoiseParams::uniform(11, 0.01, 0.0), LifetimeOptions::default());
        assert!(rows[0].error.is_some());
    }
}
