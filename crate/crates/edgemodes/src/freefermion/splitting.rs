//! Hybridization splitting of the edge pair.
//!
//! Delta(L) falls below 1e-16 for strongly localized modes, beyond what a
//! double-precision eigensolver can resolve.  The edge plane is located in
//! double precision, re-orthonormalized in double-double arithmetic, and the
//! rotation angle is read off the 2x2 Ritz matrix Q^T R Q, whose error is
//! quadratic in the subspace error.

use std::f64::consts::PI;

use twofloat::TwoFloat;

use super::edge::Sector;
use super::floquet::SingleParticleFloquet;
use crate::core::{sin_cos_pi, ChainParams};
use crate::error::{Error, Result};

type Dd = TwoFloat;

fn dd(x: f64) -> Dd {
    Dd::from(x)
}

/// (cos(pi x), sin(pi x)) normalized in double-double so the rotation is exactly orthogonal.
fn rotation(x: f64) -> (Dd, Dd) {
    let (s, c) = sin_cos_pi(x);
    let (c, s) = (dd(c), dd(s));
    let n = (c * c + s * s).sqrt();
    (c / n, s / n)
}

fn apply_r_dd(v: &mut [Dd], l: usize, cj: Dd, sj: Dd, cg: Dd, sg: Dd) {
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

fn dot(a: &[Dd], b: &[Dd]) -> Dd {
    a.iter().zip(b).fold(dd(0.0), |acc, (x, y)| acc + *x * *y)
}

fn normalize(v: &mut [Dd]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

/// Rotation angle (in [0, pi]) of R restricted to span(q1, q2), in extended precision.
pub fn ritz_angle(f: &SingleParticleFloquet, q1: &[f64], q2: &[f64]) -> f64 {
    ritz_deviation(f, q1, q2, 0.0)
}

/// |phi - target| where phi is the Ritz angle and target is 0 or pi; resolved
/// below double-precision spacing near the target.
fn ritz_deviation(f: &SingleParticleFloquet, q1: &[f64], q2: &[f64], target: f64) -> f64 {
    let l = f.l;
    let mut a: Vec<Dd> = q1.iter().map(|&x| dd(x)).collect();
    let mut b: Vec<Dd> = q2.iter().map(|&x| dd(x)).collect();
    // two passes of Gram-Schmidt
    normalize(&mut a);
    for _ in 0..2 {
        let p = dot(&a, &b);
        b.iter_mut().zip(&a).for_each(|(x, y)| *x -= p * *y);
        normalize(&mut b);
    }
    let (cj, sj) = rotation(f.j);
    let (cg, sg) = rotation(f.g);
    let mut ra = a.clone();
    let mut rb = b.clone();
    apply_r_dd(&mut ra, l, cj, sj, cg, sg);
    apply_r_dd(&mut rb, l, cj, sj, cg, sg);
    let m11 = dot(&a, &ra);
    let m12 = dot(&a, &rb);
    let m21 = dot(&b, &ra);
    let m22 = dot(&b, &rb);
    let sin_part: f64 = ((m21 - m12) / dd(2.0)).into();
    let sin_part = sin_part.abs();
    let cos_sum = (m11 + m22) / dd(2.0);
    if target == 0.0 {
        sin_part.atan2(cos_sum.into())
    } else {
        let neg: f64 = (-cos_sum).into();
        sin_part.atan2(neg)
    }
}

/// Delta = |pi - phi| (pi sector) or |phi| (zero sector) for the R-plane nearest the target.
pub fn hybridization_splitting(params: &ChainParams, sector: Sector) -> Result<f64> {
    let f = SingleParticleFloquet::new(params)?;
    splitting_of(&f, sector)
}

pub fn splitting_of(f: &SingleParticleFloquet, sector: Sector) -> Result<f64> {
    let target = match sector {
        Sector::Pi => PI,
        Sector::Zero => 0.0,
    };
    let planes = f.planes()?;
    let best = planes
        .iter()
        .min_by(|a, b| (a.phi - target).abs().partial_cmp(&(b.phi - target).abs()).unwrap())
        .ok_or_else(|| Error::Numerical("no invariant planes".into()))?;
    match &best.q2 {
        Some(q2) => Ok(ritz_deviation(f, best.q1.as_slice(), q2.as_slice(), target)),
        None => Ok((best.phi - target).abs()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freefermion::edge::{edge_eigenvalue, localization_length};

    fn delta(l: usize, g: f64) -> f64 {
        hybridization_splitting(&ChainParams::kicked_ising(l, g, 0.5), Sector::Pi).unwrap()
    }

    #[test]
    fn decoupled_point_is_exact() {
        for l in [3, 6, 11] {
            assert_eq!(delta(l, 1.0), 0.0);
        }
    }

    #[test]
    fn matches_double_precision_when_resolvable() {
        let f = SingleParticleFloquet::from_couplings(8, 0.7, 0.5);
        let planes = f.planes().unwrap();
        let p = planes.iter().max_by(|a, b| a.phi.partial_cmp(&b.phi).unwrap()).unwrap();
        let d = splitting_of(&f, Sector::Pi).unwrap();
        assert!((d - (PI - p.phi)).abs() < 1e-12, "{d} vs {}", PI - p.phi);
    }

    #[test]
    fn deep_splitting_follows_localization_length() {
        let g = 0.9;
        let xi = localization_length(edge_eigenvalue(g, 0.5, Sector::Pi).lambda);
        let d20 = delta(20, g);
        let d24 = delta(24, g);
        assert!(d24 > 0.0 && d24 < 1e-18, "{d24}");
        let slope = (d24.ln() - d20.ln()) / 4.0;
        assert!((slope * xi + 1.0).abs() < 1e-3, "slope {slope} xi {xi}");
    }

    #[test]
    fn monotone_decrease() {
        let mut prev = f64::INFINITY;
        for l in 4..16 {
            let d = delta(l, 0.8);
            assert!(d < prev);
            prev = d;
        }
    }
}
