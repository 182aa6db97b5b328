//! Envelope fits by Levenberg-Marquardt.
//!
//! The subharmonic sign flip is removed by rectifying and keeping the larger
//! of each consecutive pair of cycles; the resulting envelope is fitted in
//! linear space.  Initial guesses come from linear regression on the log
//! envelope.  Damping starts at 1e-3 and is divided by 10 on an accepted step,
//! multiplied by 10 on a rejected one.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{fourier_spectrum, peak_amplitude, SpectrumOptions, TimeSeries, Window, CYCLE_NS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnvelopeModel {
    /// A e^{-t/T_M}
    Exponential,
    /// A e^{-t/T_a - t^2/T_b^2}
    ExpGauss,
    /// A e^{-t/T_M} cos(omega_d t + phi), fitted to the signed series.
    DampedCos,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Leading cycles excluded as transient.
    pub skip: usize,
    pub max_iter: usize,
    pub min_extrema: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { skip: 10, max_iter: 500, min_extrema: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub model: EnvelopeModel,
    pub params: Vec<(String, f64)>,
    /// Root-mean-square residual of the fitted points.
    pub residual: f64,
    pub iterations: usize,
}

impl EnvelopeFit {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Lifetime in cycles (Exponential and DampedCos).
    pub fn t_m(&self) -> Option<f64> {
        self.get("T_M")
    }

    pub fn t_m_microseconds(&self) -> Option<f64> {
        self.t_m().map(|t| t * CYCLE_NS * 1e-3)
    }
}

/// Rectified envelope: larger |x| of each pair (t, t+1), t = skip, skip+2, ...
pub fn envelope_points(values: &[f64], skip: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut t = skip;
    while t + 1 < values.len() {
        let (a, b) = (values[t].abs(), values[t + 1].abs());
        out.push(if a >= b { (t as f64, a) } else { ((t + 1) as f64, b) });
        t += 2;
    }
    out
}

/// Least-squares slope of ln|x_t| over t0..t1.
pub fn log_slope(values: &[f64], t0: usize, t1: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (t0..t1.min(values.len())).map(|t| (t as f64, values[t].abs().ln())).collect();
    polyfit(&pts, 1)[1]
}

/// Least-squares slope of ln(envelope) over t0..t1, using `envelope_points`.
pub fn envelope_log_slope(values: &[f64], t0: usize, t1: usize) -> f64 {
    let end = t1.min(values.len());
    let pts: Vec<(f64, f64)> = envelope_points(&values[..end], t0).into_iter().map(|(t, y)| (t, y.ln())).collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    polyfit(&pts, 1)[1]
}

/// Least-squares polynomial coefficients c_0 + c_1 x + ... + c_d x^d.
fn polyfit(pts: &[(f64, f64)], degree: usize) -> Vec<f64> {
    let n = pts.len();
    // center and scale x for conditioning
    let xm = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let xs = pts.iter().map(|p| (p.0 - xm).abs()).fold(1e-300, f64::max);
    let a = DMatrix::from_fn(n, degree + 1, |r, c| ((pts[r].0 - xm) / xs).powi(c as i32));
    let b = DVector::from_iterator(n, pts.iter().map(|p| p.1));
    let sol = a.svd(true, true).solve(&b, 1e-14).expect("svd solve");
    // expand back to powers of x
    let mut out = vec![0.0; degree + 1];
    for (k, ck) in sol.iter().enumerate() {
        let ck = ck / xs.powi(k as i32);
        // (x - xm)^k
        for j in 0..=k {
            out[j] += ck * binom(k, j) * (-xm).powi((k - j) as i32);
        }
    }
    out
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

struct LmResult {
    p: Vec<f64>,
    cost: f64,
    iterations: usize,
}

fn levenberg_marquardt<F: Fn(&[f64]) -> Vec<f64>>(f: F, p0: Vec<f64>, max_iter: usize) -> Result<LmResult> {
    let np = p0.len();
    let cost = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>();
    let mut p = p0;
    let mut r = f(&p);
    let mut c = cost(&r);
    let mut lambda = 1e-3;
    let mut history = vec![c];
    for it in 0..max_iter {
        let m = r.len();
        let mut jac = DMatrix::<f64>::zeros(m, np);
        for k in 0..np {
            let h = 1e-7 * p[k].abs().max(1e-8);
            let mut pp = p.clone();
            pp[k] += h;
            let rp = f(&pp);
            pp[k] = p[k] - h;
            let rm = f(&pp);
            for i in 0..m {
                jac[(i, k)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * DVector::from_column_slice(&r);
        loop {
            let mut a = jtj.clone();
            for k in 0..np {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            let step = a.lu().solve(&(-&jtr));
            let accepted = step.as_ref().map(|d| {
                let trial: Vec<f64> = p.iter().zip(d.iter()).map(|(x, dx)| x + dx).collect();
                let rt = f(&trial);
                let ct = cost(&rt);
                (ct.is_finite() && ct < c, trial, rt, ct, d.norm())
            });
            match accepted {
                Some((true, trial, rt, ct, dn)) => {
                    let rel = (c - ct) / c.max(1e-300);
                    let pn = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                    p = trial;
                    r = rt;
                    c = ct;
                    history.push(c);
                    lambda = (lambda / 10.0).max(1e-15);
                    if rel < 1e-12 || dn < 1e-12 * (pn + 1e-12) || c < 1e-30 {
                        return Ok(LmResult { p, cost: c, iterations: it + 1 });
                    }
                    break;
                }
                _ => {
                    lambda *= 10.0;
                    if lambda > 1e16 {
                        // no descent direction left: stationary point
                        return Ok(LmResult { p, cost: c, iterations: it + 1 });
                    }
                }
            }
        }
    }
    Err(Error::FitFailed { iterations: max_iter, history })
}

/// Fit `model` to a real series.  Envelope models use the rectified pair
/// maxima after `skip`; DampedCos fits the signed samples directly.
pub fn fit_envelope(values: &[f64], model: EnvelopeModel, opts: FitOptions) -> Result<EnvelopeFit> {
    let env = envelope_points(values, opts.skip);
    if env.len() < opts.min_extrema {
        return Err(Error::TooFewExtrema { need: opts.min_extrema, got: env.len() });
    }
    let logs: Vec<(f64, f64)> = env.iter().filter(|p| p.1 > 0.0).map(|&(t, y)| (t, y.ln())).collect();
    if logs.len() < 3 {
        return Err(Error::TooFewExtrema { need: 3, got: logs.len() });
    }
    let lin = polyfit(&logs, 1);
    let rate0 = (-lin[1]).max(1e-8);
    match model {
        EnvelopeModel::Exponential => {
            let f = |p: &[f64]| env.iter().map(|&(t, y)| p[0] * (-p[1] * t).exp() - y).collect::<Vec<_>>();
            let res = levenberg_marquardt(f, vec![lin[0].exp(), rate0], opts.max_iter)?;
            if res.p[1] <= 0.0 {
                return Err(Error::Numerical(format!("non-positive decay rate {}", res.p[1])));
            }
            Ok(EnvelopeFit {
                model,
                params: vec![("A".into(), res.p[0]), ("T_M".into(), 1.0 / res.p[1])],
                residual: (res.cost / env.len() as f64).sqrt(),
                iterations: res.iterations,
            })
        }
        EnvelopeModel::ExpGauss => {
            let q = polyfit(&logs, 2);
            let p0 = vec![q[0].exp(), (-q[1]).max(1e-8), (-q[2]).max(1e-10)];
            let f = |p: &[f64]| env.iter().map(|&(t, y)| p[0] * (-p[1] * t - p[2] * t * t).exp() - y).collect::<Vec<_>>();
            let res = levenberg_marquardt(f, p0, opts.max_iter)?;
            if res.p[1] <= 0.0 || res.p[2] <= 0.0 {
                return Err(Error::Numerical(format!("non-positive rates {:?}", &res.p[1..])));
            }
            Ok(EnvelopeFit {
                model,
                params: vec![
                    ("A".into(), res.p[0]),
                    ("T_a".into(), 1.0 / res.p[1]),
                    ("T_b".into(), 1.0 / res.p[2].sqrt()),
                ],
                residual: (res.cost / env.len() as f64).sqrt(),
                iterations: res.iterations,
            })
        }
        EnvelopeModel::DampedCos => {
            let series = TimeSeries::real("fit", &values[opts.skip..]);
            let spec = fourier_spectrum(&series, SpectrumOptions { window: Window::Hann, pad_factor: 8 })?;
            let (w0, _) = peak_amplitude(&spec, 0.0, std::f64::consts::PI)?;
            // linear solve for (A cos phi, -A sin phi) at fixed w0, rate0
            let pts: Vec<(f64, f64)> = (opts.skip..values.len()).map(|t| (t as f64, values[t])).collect();
            let basis = DMatrix::from_fn(pts.len(), 2, |r, c| {
                let t = pts[r].0;
                (-rate0 * t).exp() * if c == 0 { (w0 * t).cos() } else { (w0 * t).sin() }
            });
            let b = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
            let ab = basis.svd(true, true).solve(&b, 1e-14).map_err(|e| Error::Numerical(e.into()))?;
            let (amp, phi) = ((ab[0] * ab[0] + ab[1] * ab[1]).sqrt(), (-ab[1]).atan2(ab[0]));
            let f = |p: &[f64]| {
                pts.iter().map(|&(t, y)| p[0] * (-p[1] * t).exp() * (p[2] * t + p[3]).cos() - y).collect::<Vec<_>>()
            };
            let res = levenberg_marquardt(f, vec![amp, rate0, w0, phi], opts.max_iter)?;
            if res.p[1] <= 0.0 {
                return Err(Error::Numerical(format!("non-positive decay rate {}", res.p[1])));
            }
            let (a, ph) = if res.p[0] < 0.0 {
                (-res.p[0], res.p[3] + std::f64::consts::PI)
            } else {
                (res.p[0], res.p[3])
            };
            Ok(EnvelopeFit {
                model,
                params: vec![
                    ("A".into(), a),
                    ("T_M".into(), 1.0 / res.p[1]),
                    ("omega_d".into(), res.p[2]),
                    ("phi".into(), ph.rem_euclid(2.0 * std::f64::consts::PI)),
                ],
                residual: (res.cost / pts.len() as f64).sqrt(),
                iterations: res.iterations,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_subharmonic() {
        let v: Vec<f64> = (0..400).map(|t| 0.9 * if t % 2 == 0 { 1.0 } else { -1.0 } * (-(t as f64) / 50.0).exp()).collect();
        let fit = fit_envelope(&v, EnvelopeModel::Exponential, FitOptions::default()).unwrap();
        assert!((fit.t_m().unwrap() / 50.0 - 1.0).abs() < 0.01);
        assert!((fit.get("A").unwrap() - 0.9).abs() < 1e-6);
        assert!((fit.t_m_microseconds().unwrap() - 50.0 * 0.093).abs() < 1e-3);
    }

    #[test]
    fn exp_gauss_recovery() {
        let (ta, tb) = (346.0, 96.0);
        let v: Vec<f64> = (0..300)
            .map(|t| {
                let t = t as f64;
                0.8 * (-t / ta - t * t / (tb * tb)).exp() * if (t as usize) % 2 == 0 { 1.0 } else { -1.0 }
            })
            .collect();
        let fit = fit_envelope(&v, EnvelopeModel::ExpGauss, FitOptions::default()).unwrap();
        assert!((fit.get("T_a").unwrap() / ta - 1.0).abs() < 0.05, "{:?}", fit);
        assert!((fit.get("T_b").unwrap() / tb - 1.0).abs() < 0.05, "{:?}", fit);
    }

    #[test]
    fn damped_cosine() {
        let (w, tm) = (2.9, 80.0);
        let v: Vec<f64> = (0..300).map(|t| 0.7 * (-(t as f64) / tm).exp() * (w * t as f64 + 0.4).cos()).collect();
        let fit = fit_envelope(&v, EnvelopeModel::DampedCos, FitOptions::default()).unwrap();
        assert!((fit.t_m().unwrap() / tm - 1.0).abs() < 1e-3);
        assert!((fit.get("omega_d").unwrap() - w).abs() < 1e-4);
        assert!((fit.get("phi").unwrap() - 0.4).abs() < 1e-3);
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            fit_envelope(&[1.0; 20], EnvelopeModel::Exponential, FitOptions::default()),
            Err(Error::TooFewExtrema { .. })
        ));
    }

    #[test]
    fn log_slope_exact() {
        let v: Vec<f64> = (0..100).map(|t| -(0.02 * t as f64).exp().recip()).collect();
        assert!((log_slope(&v, 10, 90) + 0.02).abs() < 1e-12);
    }
}
