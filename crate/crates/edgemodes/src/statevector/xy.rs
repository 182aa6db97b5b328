//! XY control model: two brick layers of sqrt(iSWAP)-type gates with a tunable
//! Z-rotation dressing zeta, then a Z-field layer.  No Z2 symmetry.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;

use super::{check_size, StateVector};
use crate::core::{ChainParams, Variant};
use crate::error::{Error, Result};

/// One cycle of U_XY.  Bonds (0,1), (2,3), ... act first, then (1,2), (3,4), ...
#[derive(Debug, Clone, PartialEq)]
pub struct XyCycle {
    pub l: usize,
    pub zeta: f64,
    /// Single-excitation block of the two-site gate, basis (excitation on j, on j+1).
    gate: [[Complex64; 2]; 2],
    /// exp(-i h_j Z_j / 2) for bit 0 and bit 1 of each site.
    field: Vec<(Complex64, Complex64)>,
    h: Vec<f64>,
}

impl XyCycle {
    pub fn new(params: &ChainParams) -> Result<Self> {
        params.validate()?;
        let Variant::XyModel { zeta } = params.variant else {
            return Err(Error::VariantMismatch("XyModel"));
        };
        Ok(Self::from_parts(params.l, zeta, &params.h))
    }

    pub fn from_parts(l: usize, zeta: f64, h: &[f64]) -> Self {
        // D B D with D = exp(-i zeta/4 (Z_j - Z_{j+1})) and B = exp(-i pi/4 (hop))
        let r = FRAC_1_SQRT_2;
        let gate = [
            [Complex64::from_polar(r, zeta), Complex64::new(0.0, -r)],
            [Complex64::new(0.0, -r), Complex64::from_polar(r, -zeta)],
        ];
        let field = h.iter().map(|&x| (Complex64::from_polar(1.0, -x / 2.0), Complex64::from_polar(1.0, x / 2.0)));
        XyCycle { l, zeta, gate, field: field.collect(), h: h.to_vec() }
    }

    fn bonds(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.l - 1).step_by(2).chain((1..self.l - 1).step_by(2))
    }

    pub fn apply(&self, state: &mut StateVector) {
        debug_assert_eq!(state.l, self.l);
        self.apply_amps(&mut state.amps);
    }

    /// Same as `apply` on a bare amplitude slice of length 2^L.
    pub fn apply_amps(&self, amps: &mut [Complex64]) {
        let g = self.gate;
        for j in self.bonds() {
            let (bj, bk) = (1usize << j, 1usize << (j + 1));
            for b in 0..amps.len() {
                // b has the excitation on j, c on j+1
                if b & bj != 0 && b & bk == 0 {
                    let c = b ^ bj ^ bk;
                    let (x, y) = (amps[b], amps[c]);
                    amps[b] = g[0][0] * x + g[0][1] * y;
                    amps[c] = g[1][0] * x + g[1][1] * y;
                }
            }
        }
        for (j, &(p0, p1)) in self.field.iter().enumerate() {
            let bit = 1usize << j;
            for (b, a) in amps.iter_mut().enumerate() {
                *a *= if b & bit == 0 { p0 } else { p1 };
            }
        }
    }

    /// One-cycle matrix on single-excitation amplitudes, phases relative to the vacuum.
    /// Row-major, M[k][m] = amplitude on k after starting on m.
    pub fn single_particle_matrix(&self) -> Vec<Vec<Complex64>> {
        let l = self.l;
        let mut cols = Vec::with_capacity(l);
        for m in 0..l {
            let mut v = vec![Complex64::new(0.0, 0.0); l];
            v[m] = Complex64::new(1.0, 0.0);
            self.apply_single(&mut v);
            cols.push(v);
        }
        (0..l).map(|k| (0..l).map(|m| cols[m][k]).collect()).collect()
    }

    pub fn apply_single(&self, v: &mut [Complex64]) {
        let g = self.gate;
        for j in self.bonds() {
            let (x, y) = (v[j], v[j + 1]);
            v[j] = g[0][0] * x + g[0][1] * y;
            v[j + 1] = g[1][0] * x + g[1][1] * y;
        }
        for (k, x) in v.iter_mut().enumerate() {
            *x *= Complex64::from_polar(1.0, self.h[k]);
        }
    }

    /// <X_1(t) + i Y_1(t)> from (|0...0> + |10...0>)/sqrt2, i.e. (M^t)_{11}.
    pub fn sigma_plus_series(&self, t_len: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.l];
        v[0] = Complex64::new(1.0, 0.0);
        let mut out = Vec::with_capacity(t_len);
        for t in 0..t_len {
            if t > 0 {
                self.apply_single(&mut v);
            }
            out.push(v[0]);
        }
        out
    }
}

pub fn apply_xy_cycle(state: &mut StateVector, zeta: f64, h: &[f64]) -> Result<()> {
    if h.len() != state.l {
        return Err(Error::LengthMismatch { left: h.len(), right: state.l });
    }
    check_size(state.l)?;
    XyCycle::from_parts(state.l, zeta, h).apply(state);
    Ok(())
}

/// Eigenmodes of the single-excitation cycle matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct XyModes {
    /// Quasienergies in [0, 2pi).
    pub phases: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
    /// 1 / sum |v_k|^4.
    pub participation: Vec<f64>,
    /// participation < L/2.
    pub edge: Vec<bool>,
}

impl XyModes {
    pub fn edge_count(&self) -> usize {
        self.edge.iter().filter(|&&e| e).count()
    }

    /// Quasienergy of the edge mode with the largest weight on site 1.
    pub fn left_edge_phase(&self) -> Option<f64> {
        (0..self.phases.len())
            .filter(|&i| self.edge[i])
            .max_by(|&a, &b| self.vectors[a][0].norm().partial_cmp(&self.vectors[b][0].norm()).unwrap())
            .map(|i| self.phases[i])
    }
}

pub fn xy_single_excitation_modes(zeta: f64, h: &[f64], l: usize) -> Result<XyModes> {
    if h.len() != l {
        return Err(Error::LengthMismatch { left: h.len(), right: l });
    }
    if l < 2 {
        return Err(Error::InvalidParam { name: "L", reason: format!("need L >= 2, got {l}") });
    }
    let m = XyCycle::from_parts(l, zeta, h).single_particle_matrix();
    let mat = Mat::<c64>::from_fn(l, l, |r, c| c64::new(m[r][c].re, m[r][c].im));
    let evd = mat.eigendecomposition::<c64>();
    let (s, u) = (evd.s(), evd.u());
    let mut out = XyModes { phases: vec![], vectors: vec![], participation: vec![], edge: vec![] };
    for i in 0..l {
        let e = s.column_vector().read(i);
        out.phases.push(e.im.atan2(e.re).rem_euclid(2.0 * PI));
        let v: Vec<Complex64> = (0..l).map(|r| u.read(r, i)).map(|z| Complex64::new(z.re, z.im)).collect();
        let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let v: Vec<Complex64> = v.iter().map(|z| z / n2.sqrt()).collect();
        let pr = 1.0 / v.iter().map(|z| z.norm_sqr().powi(2)).sum::<f64>();
        out.participation.push(pr);
        out.edge.push(pr < l as f64 / 2.0);
        out.vectors.push(v);
    }
    Ok(out)
}
