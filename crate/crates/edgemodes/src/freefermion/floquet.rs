use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::edge::{bulk_band, MajoranaMode, ModeSector, Side};
use crate::core::{sin_cos_pi, ChainParams, Variant};
use crate::error::{Error, Result};

/// Conjugation by the integrable cycle unitary on Majorana coefficient vectors:
/// the coefficients of U^dag (sum psi_m a_m) U are `R psi`.
#[derive(Debug, Clone)]
pub struct SingleParticleFloquet {
    pub l: usize,
    pub g: f64,
    pub j: f64,
    pub r: DMatrix<f64>,
}

/// One invariant 2-plane of R: rotation angle phi in [0, pi] and an orthonormal basis.
#[derive(Debug, Clone)]
pub struct RotationPlane {
    pub phi: f64,
    pub q1: DVector<f64>,
    pub q2: Option<DVector<f64>>,
}

impl SingleParticleFloquet {
    pub fn new(params: &ChainParams) -> Result<Self> {
        params.validate()?;
        if params.variant != Variant::KickedIsing {
            return Err(Error::VariantMismatch("KickedIsing"));
        }
        if !params.is_integrable() {
            return Err(Error::NonIntegrable(params.max_abs_h()));
        }
        Ok(Self::from_couplings(params.l, params.g, params.j))
    }

    pub fn from_couplings(l: usize, g: f64, j: f64) -> Self {
        let n = 2 * l;
        let mut r = DMatrix::<f64>::identity(n, n);
        for c in 0..n {
            let mut col = r.column(c).clone_owned();
            apply_r(col.as_mut_slice(), l, g, j);
            r.set_column(c, &col);
        }
        SingleParticleFloquet { l, g, j, r }
    }

    pub fn dim(&self) -> usize {
        2 * self.l
    }

    /// In-place `v <- R v` in O(L).
    pub fn apply(&self, v: &mut [f64]) {
        apply_r(v, self.l, self.g, self.j);
    }

    /// In-place `v <- R^T v`.
    pub fn apply_transpose(&self, v: &mut [f64]) {
        apply_rt(v, self.l, self.g, self.j);
    }

    /// Invariant planes from the real Schur form, sorted by phi.
    pub fn planes(&self) -> Result<Vec<RotationPlane>> {
        let n = self.dim();
        let schur = nalgebra::linalg::Schur::try_new(self.r.clone(), f64::EPSILON, 100_000)
            .ok_or_else(|| Error::Numerical("real Schur decomposition did not converge".into()))?;
        let (q, t) = schur.unpack();
        let mut out = Vec::with_capacity(self.l);
        let mut i = 0;
        while i < n {
            let two = i + 1 < n && t[(i + 1, i)].abs() > 1e-13;
            if two {
                let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
                let phi = ((c - b).abs() / 2.0).atan2((a + d) / 2.0);
                out.push(RotationPlane {
                    phi,
                    q1: q.column(i).clone_owned(),
                    q2: Some(q.column(i + 1).clone_owned()),
                });
                i += 2;
            } else {
                let phi = if t[(i, i)] < 0.0 { PI } else { 0.0 };
                out.push(RotationPlane { phi, q1: q.column(i).clone_owned(), q2: None });
                i += 1;
            }
        }
        // Real eigenvalues +-1 come in pairs on invariant planes of angle 0 or pi: merge them.
        let mut merged: Vec<RotationPlane> = Vec::with_capacity(self.l);
        let mut singles: Vec<RotationPlane> = Vec::new();
        for p in out {
            if p.q2.is_some() {
                merged.push(p);
            } else {
                singles.push(p);
            }
        }
        singles.sort_by(|a, b| a.phi.partial_cmp(&b.phi).unwrap());
        let mut k = 0;
        while k < singles.len() {
            if k + 1 < singles.len() && singles[k].phi == singles[k + 1].phi {
                merged.push(RotationPlane {
                    phi: singles[k].phi,
                    q1: singles[k].q1.clone(),
                    q2: Some(singles[k + 1].q1.clone()),
                });
                k += 2;
            } else {
                merged.push(singles[k].clone());
                k += 1;
            }
        }
        merged.sort_by(|a, b| a.phi.partial_cmp(&b.phi).unwrap());
        Ok(merged)
    }

    /// All 2L eigenphases e^{+-i phi}, as angles in [0, 2pi), sorted.
    pub fn eigenphases(&self) -> Result<Vec<f64>> {
        let mut v = Vec::with_capacity(self.dim());
        for p in self.planes()? {
            let m = if p.q2.is_some() { 2 } else { 1 };
            if m == 2 {
                v.push(p.phi);
                v.push((2.0 * PI - p.phi) % (2.0 * PI));
            } else {
                v.push(p.phi);
            }
        }
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(v)
    }

    /// Modes with sector labels.  Edge planes are split into left/right-localized vectors.
    pub fn modes(&self) -> Result<Vec<MajoranaMode>> {
        let (lo, hi) = bulk_band(self.g, self.j);
        let margin = 1e-9;
        let mut out = Vec::new();
        for p in self.planes()? {
            let inside = p.phi >= lo - margin && p.phi <= hi + margin;
            let sector = if inside {
                ModeSector::Bulk
            } else if p.phi > PI / 2.0 {
                ModeSector::Pi
            } else {
                ModeSector::Zero
            };
            match (&p.q2, sector) {
                (Some(q2), ModeSector::Pi | ModeSector::Zero) => {
                    let (left, right) = split_edges(&p.q1, q2, self.l);
                    out.push(MajoranaMode { psi: left, phi: p.phi, sector, edge: Some(Side::Left) });
                    out.push(MajoranaMode { psi: right, phi: p.phi, sector, edge: Some(Side::Right) });
                }
                _ => {
                    out.push(MajoranaMode { psi: p.q1.as_slice().to_vec(), phi: p.phi, sector, edge: None });
                    if let Some(q2) = &p.q2 {
                        out.push(MajoranaMode { psi: q2.as_slice().to_vec(), phi: p.phi, sector, edge: None });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `v <- R v` with R = Mg^T MJ^T built from exact plane rotations.
pub fn apply_r(v: &mut [f64], l: usize, g: f64, j: f64) {
    let (sj, cj) = sin_cos_pi(j);
    let (sg, cg) = sin_cos_pi(g);
    // MJ^T on pairs (2k+1, 2k+2), 0-based
    for k in 0..l - 1 {
        let (p, q) = (2 * k + 1, 2 * k + 2);
        let (a, b) = (v[p], v[q]);
        v[p] = cj * a - sj * b;
        v[q] = sj * a + cj * b;
    }
    for k in 0..l {
        let (p, q) = (2 * k, 2 * k + 1);
        let (a, b) = (v[p], v[q]);
        v[p] = cg * a - sg * b;
        v[q] = sg * a + cg * b;
    }
}

/// `v <- R^T v`, the inverse cycle.
pub fn apply_rt(v: &mut [f64], l: usize, g: f64, j: f64) {
    let (sj, cj) = sin_cos_pi(j);
    let (sg, cg) = sin_cos_pi(g);
    for k in 0..l {
        let (p, q) = (2 * k, 2 * k + 1);
        let (a, b) = (v[p], v[q]);
        v[p] = cg * a + sg * b;
        v[q] = -sg * a + cg * b;
    }
    for k in 0..l - 1 {
        let (p, q) = (2 * k + 1, 2 * k + 2);
        let (a, b) = (v[p], v[q]);
        v[p] = cj * a + sj * b;
        v[q] = -sj * a + cj * b;
    }
}

/// Rotate an orthonormal plane basis so the first vector carries maximal left-half weight.
fn split_edges(q1: &DVector<f64>, q2: &DVector<f64>, l: usize) -> (Vec<f64>, Vec<f64>) {
    let half = l; // first L Majoranas = left half of the chain
    let w = |a: &DVector<f64>, b: &DVector<f64>| (0..half).map(|m| a[m] * b[m]).sum::<f64>();
    let (w11, w12, w22) = (w(q1, q1), w(q1, q2), w(q2, q2));
    let theta = 0.5 * (2.0 * w12).atan2(w11 - w22);
    let (s, c) = theta.sin_cos();
    let left: Vec<f64> = (0..q1.len()).map(|m| c * q1[m] + s * q2[m]).collect();
    let right: Vec<f64> = (0..q1.len()).map(|m| -s * q1[m] + c * q2[m]).collect();
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freefermion::edge::{edge_wavefunction, Sector};

    #[test]
    fn orthogonal_with_unit_det() {
        let f = SingleParticleFloquet::from_couplings(9, 0.73, 0.41);
        let n = f.dim();
        let err = (f.r.transpose() * &f.r - DMatrix::<f64>::identity(n, n)).abs().max();
        assert!(err < 1e-12);
        assert!((f.r.determinant() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn transpose_inverts() {
        let f = SingleParticleFloquet::from_couplings(6, 0.37, 0.61);
        let v0: Vec<f64> = (0..12).map(|k| (k as f64 * 0.7).sin()).collect();
        let mut v = v0.clone();
        f.apply(&mut v);
        f.apply_transpose(&mut v);
        assert!(v.iter().zip(&v0).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn long_run_stays_orthogonal() {
        let f = SingleParticleFloquet::from_couplings(6, 0.8, 0.5);
        let mut v = vec![0.0; 12];
        v[0] = 1.0;
        for _ in 0..10_000 {
            f.apply(&mut v);
        }
        let n: f64 = v.iter().map(|x| x * x).sum();
        assert!((n - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_fields_and_xy() {
        let p = ChainParams::kicked_ising(4, 0.8, 0.5).with_uniform_h(0.1);
        assert!(matches!(SingleParticleFloquet::new(&p), Err(Error::NonIntegrable(_))));
        assert!(SingleParticleFloquet::new(&ChainParams::xy(4, 1.0)).is_err());
    }

    #[test]
    fn edge_modes_are_eigenvectors() {
        for (g, sector, sign) in [(0.8, Sector::Pi, -1.0), (0.25, Sector::Zero, 1.0)] {
            let l = 24;
            let f = SingleParticleFloquet::from_couplings(l, g, 0.5);
            for side in [Side::Left, Side::Right] {
                let m = edge_wavefunction(g, 0.5, sector, side, l).unwrap();
                let mut v = m.psi.clone();
                f.apply(&mut v);
                let res: f64 = v.iter().zip(&m.psi).map(|(a, b)| (a - sign * b).powi(2)).sum::<f64>().sqrt();
                // truncation error is O(|lambda|^L)
                let lam = crate::freefermion::edge::edge_eigenvalue(g, 0.5, sector).lambda.abs();
                assert!(res < 10.0 * lam.powi(l as i32), "{g} {side:?} {res}");
            }
        }
    }

    #[test]
    fn eigenphases_pair_up() {
        let f = SingleParticleFloquet::from_couplings(8, 0.7, 0.5);
        let ph = f.eigenphases().unwrap();
        assert_eq!(ph.len(), 16);
        for &x in &ph {
            let partner = (2.0 * PI - x) % (2.0 * PI);
            assert!(ph.iter().any(|y| ((y - partner + PI).rem_euclid(2.0 * PI) - PI).abs() < 1e-10));
        }
    }

    #[test]
    fn decoupled_point_planes() {
        let f = SingleParticleFloquet::from_couplings(5, 1.0, 0.5);
        let planes = f.planes().unwrap();
        assert_eq!(planes.iter().map(|p| if p.q2.is_some() { 2 } else { 1 }).sum::<usize>(), 10);
        assert!(planes.iter().any(|p| (p.phi - PI).abs() < 1e-12));
    }
}
