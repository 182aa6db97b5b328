//! Closed-form edge-mode theory: dispersion, transfer matrix, lambda, wavefunctions.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    Zero,
    Pi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Bulk quasienergy phi_k in [0, pi] for the periodic chain.
pub fn bulk_dispersion(g: f64, j: f64, k: f64) -> f64 {
    let c = (PI * j).cos() * (PI * g).cos() + (PI * j).sin() * (PI * g).sin() * k.cos();
    c.clamp(-1.0, 1.0).acos()
}

/// Band edges [min_k phi_k, max_k phi_k]; the extremes sit at k = 0 and k = pi.
pub fn bulk_band(g: f64, j: f64) -> (f64, f64) {
    let a = bulk_dispersion(g, j, 0.0);
    let b = bulk_dispersion(g, j, PI);
    (a.min(b), a.max(b))
}

/// Transfer matrix T_phi propagating (psi_{2j-1}, psi_{2j}) one site.
pub fn transfer_matrix(g: f64, j: f64, phi: f64) -> Result<Matrix2<Complex64>> {
    let (sg, cg) = (PI * g).sin_cos();
    let (sj, cj) = (PI * j).sin_cos();
    if sj.abs() < 1e-300 {
        return Err(Error::SingularTransfer("J"));
    }
    if sg.abs() < 1e-300 {
        return Err(Error::SingularTransfer("g"));
    }
    let em = Complex64::from_polar(1.0, -phi);
    let ep = Complex64::from_polar(1.0, phi);
    let off = em * cg - cj;
    let m = Matrix2::new(
        em * sg,
        off,
        off,
        ep / sg - Complex64::from(2.0 * cj * cg / sg) + em * (cg * cg / sg),
    );
    Ok(m / Complex64::from(sj))
}

/// Transfer-matrix eigenvalue of the edge mode with a localization flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeEigenvalue {
    pub lambda: f64,
    /// |lambda| < 1.
    pub localized: bool,
}

/// lambda_0 = tan(pi g/2)/tan(pi J/2), lambda_pi = -1/(tan(pi g/2) tan(pi J/2)).
pub fn edge_eigenvalue(g: f64, j: f64, sector: Sector) -> EdgeEigenvalue {
    // exact at the special points used as fixtures
    let tg = if g == 0.5 { 1.0 } else { (PI * g / 2.0).tan() };
    let tj = if j == 0.5 { 1.0 } else { (PI * j / 2.0).tan() };
    let lambda = match sector {
        Sector::Zero => tg / tj,
        Sector::Pi => {
            if g == 1.0 {
                0.0
            } else {
                -1.0 / (tg * tj)
            }
        }
    };
    EdgeEigenvalue { lambda, localized: lambda.abs() < 1.0 }
}

/// Localization length -1/ln|lambda|.
pub fn localization_length(lambda: f64) -> f64 {
    -1.0 / lambda.abs().ln()
}

/// Closed-form summary of one edge sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeTheory {
    pub lambda_0: f64,
    pub lambda_pi: f64,
    pub xi_pi: f64,
    pub c_pi: f64,
    pub c_0: f64,
}

impl EdgeTheory {
    pub fn new(g: f64, j: f64) -> Self {
        let l0 = edge_eigenvalue(g, j, Sector::Zero).lambda;
        let lp = edge_eigenvalue(g, j, Sector::Pi).lambda;
        EdgeTheory {
            lambda_0: l0,
            lambda_pi: lp,
            xi_pi: localization_length(lp),
            c_pi: (1.0 - lp * lp).max(0.0).sqrt(),
            c_0: (1.0 - l0 * l0).max(0.0).sqrt(),
        }
    }
}

/// Eigenvector of R (or an approximate one) over the 2L Majoranas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajoranaMode {
    /// psi[m-1] is the coefficient of a_m.
    pub psi: Vec<f64>,
    /// Quasienergy in [0, pi] (the conjugate partner is implied).
    pub phi: f64,
    pub sector: ModeSector,
    pub edge: Option<Side>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeSector {
    Zero,
    Pi,
    Bulk,
}

impl From<Sector> for ModeSector {
    fn from(s: Sector) -> Self {
        match s {
            Sector::Zero => ModeSector::Zero,
            Sector::Pi => ModeSector::Pi,
        }
    }
}

/// Left- or right-edge wavefunction, truncated at L sites and renormalized.
pub fn edge_wavefunction(g: f64, j: f64, sector: Sector, side: Side, l: usize) -> Result<MajoranaMode> {
    let ev = edge_eigenvalue(g, j, sector);
    if !ev.localized {
        return Err(Error::Delocalized(ev.lambda.abs()));
    }
    let (s, c) = (PI * g / 2.0).sin_cos();
    let (u, v) = match sector {
        Sector::Pi => (s, -c),
        Sector::Zero => (c, s),
    };
    let mut psi = vec![0.0; 2 * l];
    let mut amp = 1.0;
    for site in 0..l {
        psi[2 * site] = amp * u;
        psi[2 * site + 1] = amp * v;
        amp *= ev.lambda;
    }
    let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|x| *x /= norm);
    if side == Side::Right {
        psi = reflect_majorana(&psi);
    }
    let phi = match sector {
        Sector::Pi => PI,
        Sector::Zero => 0.0,
    };
    Ok(MajoranaMode { psi, phi, sector: sector.into(), edge: Some(side) })
}

/// Index reflection a_{2j-1} -> a_{2(L-j+1)}, a_{2j} -> a_{2(L-j)+1}, i.e. m -> 2L+1-m,
/// with the sign (-1)^m on the new index m.
///
/// Reversal alone swaps the two members of every rotation pair of R and so
/// inverts every angle; the alternating sign inverts them back, making the
/// reflected vector an eigenvector of R again.  Applying it twice gives -psi.
pub fn reflect_majorana(psi: &[f64]) -> Vec<f64> {
    psi.iter().rev().enumerate().map(|(i, &x)| if i % 2 == 0 { -x } else { x }).collect()
}
