//! Exact diagonalization of the many-body Floquet operator and the
//! pi-pairing diagnostic.

use std::f64::consts::PI;

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;

use super::kicked::KickedIsingCycle;
use super::xy::XyCycle;
use super::StateVector;
use crate::core::{ChainParams, Variant};
use crate::error::{Error, Result};

/// Largest chain for dense diagonalization (matrix dimension 2^12).
pub const DENSE_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct FloquetSpectrum {
    pub l: usize,
    /// Quasienergies in (-pi, pi].
    pub eigenphases: Vec<f64>,
    /// Orthonormal eigenvectors, one per eigenphase.
    pub eigenvectors: Vec<Vec<Complex64>>,
    /// Eigenvalue of S = prod X_j, when the drive is Z2 symmetric.
    pub parity: Option<Vec<i8>>,
}

impl FloquetSpectrum {
    /// max |U - V diag(e^{i theta}) V^dag| over entries.
    pub fn reconstruction_error(&self, u: &[Vec<Complex64>]) -> f64 {
        let n = self.eigenphases.len();
        let lam: Vec<Complex64> = self.eigenphases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let mut err: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.eigenvectors[k][r] * lam[k] * self.eigenvectors[k][c].conj();
                }
                // u is stored by columns
                err = err.max((u[c][r] - acc).norm());
            }
        }
        err
    }
}

fn check_dense(params: &ChainParams) -> Result<()> {
    params.validate()?;
    if params.l > DENSE_CAP {
        return Err(Error::SizeLimit { l: params.l, cap: DENSE_CAP, engine: "dense diagonalization" });
    }
    Ok(())
}

/// Columns of the one-cycle unitary: `u[c]` = U |c>.
pub fn floquet_unitary(params: &ChainParams) -> Result<Vec<Vec<Complex64>>> {
    check_dense(params)?;
    let l = params.l;
    let step: Box<dyn Fn(&mut StateVector)> = match params.variant {
        Variant::KickedIsing => {
            let c = KickedIsingCycle::new(params)?;
            Box::new(move |s| c.apply(s))
        }
        Variant::XyModel { .. } => {
            let c = XyCycle::new(params)?;
            Box::new(move |s| c.apply(s))
        }
    };
    (0..1usize << l)
        .map(|b| {
            let mut s = StateVector::basis(l, b)?;
            step(&mut s);
            Ok(s.amps)
        })
        .collect()
}

fn z2_symmetric(params: &ChainParams) -> bool {
    params.variant == Variant::KickedIsing && params.max_abs_h() == 0.0
}

/// Blocks of U in the S = +-1 sectors, basis (|r> +- |r^all>)/sqrt2 with the top bit of r clear.
fn parity_blocks(u: &[Vec<Complex64>], l: usize) -> [Mat<c64>; 2] {
    let half = 1usize << (l - 1);
    let all = (1usize << l) - 1;
    let block = |sigma: f64| {
        Mat::<c64>::from_fn(half, half, |r, c| {
            let (rb, cb) = (r ^ all, c ^ all);
            let z = (u[c][r] + u[cb][rb] + (u[cb][r] + u[c][rb]) * sigma) * 0.5;
            c64::new(z.re, z.im)
        })
    };
    [block(1.0), block(-1.0)]
}

fn to_faer(u: &[Vec<Complex64>]) -> Mat<c64> {
    let n = u.len();
    Mat::<c64>::from_fn(n, n, |r, c| c64::new(u[c][r].re, u[c][r].im))
}

fn phase_of(z: c64) -> f64 {
    let t = z.im.atan2(z.re);
    if t <= -PI {
        PI
    } else {
        t
    }
}

/// All 2^L quasienergies, sorted.  Splits into parity sectors when h = 0.
pub fn floquet_eigenphases(params: &ChainParams) -> Result<Vec<f64>> {
    let u = floquet_unitary(params)?;
    let mut out: Vec<f64> = if z2_symmetric(params) {
        parity_blocks(&u, params.l)
            .iter()
            .flat_map(|b| b.eigenvalues::<c64>().into_iter().map(phase_of).collect::<Vec<_>>())
            .collect()
    } else {
        to_faer(&u).eigenvalues::<c64>().into_iter().map(phase_of).collect()
    };
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

fn eig_block(m: &Mat<c64>) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let n = m.nrows();
    let evd = m.eigendecomposition::<c64>();
    let (s, u) = (evd.s(), evd.u());
    let phases = (0..n).map(|i| phase_of(s.column_vector().read(i))).collect();
    let vecs = (0..n).map(|i| (0..n).map(|r| u.read(r, i)).map(|z| Complex64::new(z.re, z.im)).collect()).collect();
    (phases, vecs)
}

/// Full eigendecomposition with orthonormal eigenvectors (degenerate clusters
/// are re-orthogonalized) and parity labels when Z2 symmetric.
pub fn exact_floquet_diagonalize(params: &ChainParams) -> Result<FloquetSpectrum> {
    let u = floquet_unitary(params)?;
    let l = params.l;
    let n = 1usize << l;
    let (mut phases, mut vecs, parity) = if z2_symmetric(params) {
        let all = n - 1;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut phases = Vec::with_capacity(n);
        let mut vecs = Vec::with_capacity(n);
        let mut parity = Vec::with_capacity(n);
        for (blk, sigma) in parity_blocks(&u, l).iter().zip([1i8, -1]) {
            let (p, v) = eig_block(blk);
            for (theta, w) in p.into_iter().zip(v) {
                let mut full = vec![Complex64::new(0.0, 0.0); n];
                for (rep, x) in w.iter().enumerate() {
                    full[rep] += x * r;
                    full[rep ^ all] += x * r * sigma as f64;
                }
                phases.push(theta);
                vecs.push(full);
                parity.push(sigma);
            }
        }
        (phases, vecs, Some(parity))
    } else {
        let (p, v) = eig_block(&to_faer(&u));
        (p, v, None)
    };
    orthonormalize_clusters(&phases, &mut vecs);
    // sort by phase, carrying vectors and labels
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| phases[a].partial_cmp(&phases[b]).unwrap());
    let parity = parity.map(|p| order.iter().map(|&i| p[i]).collect());
    vecs = order.iter().map(|&i| std::mem::take(&mut vecs[i])).collect();
    phases = order.iter().map(|&i| phases[i]).collect();
    Ok(FloquetSpectrum { l, eigenphases: phases, eigenvectors: vecs, parity })
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Modified Gram-Schmidt inside each cluster of (nearly) equal eigenphases.
fn orthonormalize_clusters(phases: &[f64], vecs: &mut [Vec<Complex64>]) {
    let n = phases.len();
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] {
            continue;
        }
        let cluster: Vec<usize> = (i..n).filter(|&k| !done[k] && circular_distance(phases[k], phases[i]) < 1e-8).collect();
        for (a, &k) in cluster.iter().enumerate() {
            for _ in 0..2 {
                for &p in &cluster[..a] {
                    let proj: Complex64 = vecs[p].iter().zip(&vecs[k]).map(|(x, y)| x.conj() * y).sum();
                    let prev = vecs[p].clone();
                    vecs[k].iter_mut().zip(&prev).for_each(|(y, x)| *y -= proj * x);
                }
            }
            let nrm = vecs[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            vecs[k].iter_mut().for_each(|z| *z /= nrm);
            done[k] = true;
        }
    }
}

/// max_i min_j |theta_i + pi - theta_j| on the circle.
///
/// Each eigenphase takes its nearest partner near theta + pi; the worst case
/// over the spectrum measures the breakdown of exact pi-pairing.
pub fn pi_pairing_defect(phases: &[f64]) -> f64 {
    if phases.is_empty() {
        return 0.0;
    }
    let mut sorted: Vec<f64> = phases.iter().map(|t| t.rem_euclid(2.0 * PI)).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let mut worst: f64 = 0.0;
    for &t in &sorted {
        let target = (t + PI).rem_euclid(2.0 * PI);
        let k = sorted.partition_point(|&x| x < target);
        let d = circular_distance(sorted[k % n], target).min(circular_distance(sorted[(k + n - 1) % n], target));
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::RngSpec;
    use crate::freefermion::{hybridization_splitting, Sector};

    #[test]
    fn decoupled_point_pairs_exactly() {
        let p = ChainParams::kicked_ising(4, 1.0, 0.5);
        let ph = floquet_eigenphases(&p).unwrap();
        assert_eq!(ph.len(), 16);
        assert!(pi_pairing_defect(&ph) < 1e-12);
    }

    #[test]
    fn synthetic_defect() {
        assert!(pi_pairing_defect(&[0.1, 0.1 + PI, -0.5, PI - 0.5]) < 1e-15);
        let d = pi_pairing_defect(&[0.0, PI - 0.01]);
        assert!((d - 0.01).abs() < 1e-12);
    }

    #[test]
    fn defect_equals_splitting_at_zero_field() {
        for (l, g) in [(6, 0.7), (8, 0.8)] {
            let p = ChainParams::kicked_ising(l, g, 0.5);
            let d = pi_pairing_defect(&floquet_eigenphases(&p).unwrap());
            let delta = hybridization_splitting(&p, Sector::Pi).unwrap();
            assert!((d - delta).abs() < 1e-10, "L={l} g={g}: {d} vs {delta}");
        }
    }

    #[test]
    fn reconstruction() {
        let h = crate::core::sample_disorder(0.4, 6, RngSpec::new(12));
        for p in [ChainParams::kicked_ising(6, 0.8, 0.5).with_h(h), ChainParams::kicked_ising(6, 0.8, 0.5)] {
            let u = floquet_unitary(&p).unwrap();
            let spec = exact_floquet_diagonalize(&p).unwrap();
            assert_eq!(spec.eigenphases.len(), 64);
            assert!(spec.reconstruction_error(&u) < 1e-8);
            let fast = floquet_eigenphases(&p).unwrap();
            for (a, b) in fast.iter().zip(&spec.eigenphases) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn parity_labels() {
        let p = ChainParams::kicked_ising(5, 0.6, 0.5);
        let spec = exact_floquet_diagonalize(&p).unwrap();
        let par = spec.parity.unwrap();
        assert_eq!(par.iter().filter(|&&s| s == 1).count(), 16);
        let all = 31usize;
        for (v, s) in spec.eigenvectors.iter().zip(&par) {
            for b in 0..32 {
                assert!((v[b ^ all] - v[b] * *s as f64).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn size_cap() {
        assert!(matches!(
            floquet_eigenphases(&ChainParams::kicked_ising(13, 0.8, 0.5)),
            Err(Error::SizeLimit { .. })
        ));
    }
}
