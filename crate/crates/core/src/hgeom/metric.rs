use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hyperbolic distance in the right half-plane `Re z > 0` with curvature -1.
pub fn dist_hr(z: Complex64, w: Complex64) -> Result<f64> {
    if !(z.re > 0.0 && w.re > 0.0) || !(z.im.is_finite() && w.im.is_finite()) {
        return Err(Error::OutOfDomain);
    }
    Ok(2.0 * ((z - w).norm() / (2.0 * (z.re * w.re).sqrt())).asinh())
}

/// The real-linear map `x -> a x + b conj(x)` taking the lattice
/// `2 pi i Z + L1 Z` to `2 pi i Z + L2 Z`, fixing `2 pi i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineStretch {
    pub a: Complex64,
    pub b: Complex64,
    /// Beltrami coefficient `b / a`.
    pub mu: Complex64,
    /// Maximal dilatation `(1 + |mu|) / (1 - |mu|)`.
    pub k: f64,
    pub log_k: f64,
}

impl AffineStretch {
    pub fn apply(&self, x: Complex64) -> Complex64 {
        self.a * x + self.b * x.conj()
    }
}

pub fn affine_between_tori(l1: Complex64, l2: Complex64) -> Result<AffineStretch> {
    if !(l1.re > 0.0 && l2.re > 0.0) {
        return Err(Error::OutOfDomain);
    }
    let two_re = 2.0 * l1.re;
    let a = (l2 + l1.conj()) / two_re;
    let b = (l2 - l1) / two_re;
    let (num, den) = ((l2 - l1).norm(), (l2 + l1.conj()).norm());
    let mu_abs = num / den;
    // 1 - |mu| without cancellation: |l2 + conj l1|^2 - |l2 - l1|^2 = 4 Re l1 Re l2.
    let gap = 4.0 * l1.re * l2.re / (den * (den + num));
    Ok(AffineStretch { a, b, mu: b / a, k: (1.0 + mu_abs) / gap, log_k: mu_abs.ln_1p() - gap.ln() })
}

/// `A(z) = -2 pi i (n z - 2 pi i m) / (v z - 2 pi i u)` with `n u - v m = 1`,
/// an isometry of the right half-plane sending `2 pi i u / v` to infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MobiusA {
    pub m: i64,
    pub n: i64,
    pub u: i64,
    pub v: i64,
}

impl MobiusA {
    pub const IDENTITY: MobiusA = MobiusA { m: 0, n: 1, u: 1, v: 0 };

    pub fn new(m: i64, n: i64, u: i64, v: i64) -> Result<Self> {
        if n as i128 * u as i128 - v as i128 * m as i128 != 1 {
            return Err(Error::InvalidInput(format!("n u - v m != 1 for (m, n, u, v) = ({m}, {n}, {u}, {v})")));
        }
        Ok(Self { m, n, u, v })
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let two_pi_i = Complex64::new(0.0, TAU);
        let den = self.v as f64 * z - two_pi_i * self.u as f64;
        if den.norm() <= 1e-14 * (1.0 + z.norm()) {
            return Err(Error::PoleHit);
        }
        Ok(-two_pi_i * (self.n as f64 * z - two_pi_i * self.m as f64) / den)
    }
}

pub fn mobius_a(m: i64, n: i64, u: i64, v: i64, z: Complex64) -> Result<Complex64> {
    MobiusA::new(m, n, u, v)?.apply(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn distance_examples() {
        assert!((dist_hr(c(1.0, 0.0), c(2.0, 0.0)).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(dist_hr(c(1.0, 0.0), c(1.0, 0.0)).unwrap(), 0.0);
        assert_eq!(dist_hr(c(0.0, 1.0), c(1.0, 0.0)), Err(Error::OutOfDomain));
        // Along a vertical line the distance is the log of the ratio of real parts.
        assert!((dist_hr(c(1e-6, 3.0), c(1.0, 3.0)).unwrap() - 1e6f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn stretch_between_equal_tori_is_identity() {
        let s = affine_between_tori(c(1.0, 0.5), c(1.0, 0.5)).unwrap();
        assert_eq!(s.k, 1.0);
        assert_eq!(s.log_k, 0.0);
        assert_eq!(s.b, c(0.0, 0.0));
    }

    #[test]
    fn stretch_maps_generators() {
        let (l1, l2) = (c(0.7, 1.3), c(2.1, -0.4));
        let s = affine_between_tori(l1, l2).unwrap();
        assert!((s.apply(l1) - l2).norm() < 1e-14);
        assert!((s.apply(c(0.0, TAU)) - c(0.0, TAU)).norm() < 1e-14);
        assert!((s.log_k - 2.0 * s.mu.norm().atanh()).abs() < 1e-12);
    }

    #[test]
    fn identity_transform() {
        assert_eq!(mobius_a(0, 1, 1, 0, c(0.3, 2.0)).unwrap(), c(0.3, 2.0));
    }

    #[test]
    fn pole_and_coefficient_checks() {
        assert_eq!(mobius_a(0, 1, 1, 1, c(0.0, TAU)), Err(Error::PoleHit));
        assert!(matches!(mobius_a(1, 1, 1, 1, c(1.0, 0.0)), Err(Error::InvalidInput(_))));
    }
}
