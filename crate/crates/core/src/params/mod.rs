//! Parameter space: the quadratic-family coordinate, the rescaled coordinate
//! `Lambda = Log(lambda^q)` near a satellite root, membership tests, the
//! multiplier map of the satellite cycle, sublimb roots and limb scans.

mod limbscan;
mod multiplier;

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::escape_radius;
use crate::error::{Error, Result};
use crate::rational::IrreducibleRational;

pub use limbscan::{sublimb_diameter, LimbDiameters, LimbScanConfig};
pub use multiplier::{
    component_center, invert_multiplier, multiplier_map, solve_for_multiplier, sublimb_root,
    MultiplierSolution, SublimbId,
};

/// `c(lambda) = lambda/2 - lambda^2/4`, conjugating `P_lambda` to `z^2 + c`.
pub fn c_of_lambda(lambda: Complex64) -> Complex64 {
    lambda / 2.0 - lambda * lambda / 4.0
}

/// A point of the closed right half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint(Complex64);

impl HalfPlanePoint {
    pub const SLACK: f64 = 1e-12;

    pub fn new(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() && z.re >= -Self::SLACK {
            Ok(Self(z))
        } else {
            Err(Error::OutOfDomain)
        }
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// `Log(lambda^q)` on the principal branch.
///
/// The real part is formed as `(q/2) ln(1 + (|lambda|^2 - 1))` with a fused
/// `|lambda|^2 - 1`, which keeps full relative accuracy near the unit circle.
pub fn log_lambda_power(q: usize, lambda: Complex64) -> Result<Complex64> {
    let excess = lambda.re.mul_add(lambda.re, lambda.im.mul_add(lambda.im, -1.0));
    let re = 0.5 * q as f64 * excess.ln_1p();
    let turns = q as f64 * lambda.arg();
    let im = turns - TAU * (turns / TAU).round();
    if (im.abs() - PI).abs() < 1e-12 {
        return Err(Error::BranchCut);
    }
    Ok(Complex64::new(re, im))
}

/// The rescaled coordinate `Lambda = Log(lambda^q)` of a parameter in the
/// right half-plane.
pub fn big_lambda(pq: IrreducibleRational, lambda: Complex64) -> Result<HalfPlanePoint> {
    HalfPlanePoint::new(log_lambda_power(pq.period(), lambda)?)
}

/// The principal preimage `lambda = e^{2 pi i p/q} e^{Lambda/q}`.
pub fn lambda_from_big(pq: IrreducibleRational, big: Complex64) -> Complex64 {
    pq.root() * (big / pq.q() as f64).exp()
}

/// Whether `Lambda` lies in the closed disk `|Lambda - log 2| <= log 2`.
pub fn yoccoz_disk_check(big: Complex64) -> bool {
    (big - LN_2).norm() <= LN_2 + 1e-9
}

/// What happened to the critical orbit within the iteration budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fate {
    /// Left the escape disk at the given step.
    Escaped(usize),
    /// Returned to within tolerance of an earlier point after the given
    /// number of steps, a multiple of the cycle period.
    Captured(usize),
    /// Neither within the budget.
    Undecided,
}

/// Follows the critical orbit `-lambda/2` for up to `max_iter` steps.
///
/// `capture_tol` is the relative distance at which a return counts as a
/// cycle; `0.0` only accepts exact repetition, which never changes the
/// escape verdict. Returns are checked against checkpoints at powers of two.
pub fn critical_fate(lambda: Complex64, max_iter: usize, capture_tol: f64) -> Fate {
    let r2 = escape_radius(lambda).powi(2);
    let mut z = -lambda / 2.0;
    let mut saved = z;
    let mut span = 1usize;
    let mut since = 0usize;
    for k in 1..=max_iter {
        z = lambda * z + z * z;
        if z.norm_sqr() > r2 || !z.re.is_finite() {
            return Fate::Escaped(k);
        }
        since += 1;
        let gap = (z - saved).norm_sqr();
        if gap <= capture_tol * capture_tol * (1.0 + z.norm_sqr()) {
            return Fate::Captured(since);
        }
        if since == span {
            saved = z;
            span *= 2;
            since = 0;
        }
    }
    Fate::Undecided
}

/// Whether the critical orbit stays bounded for `max_iter` steps, with the
/// escape step otherwise.
pub fn membership(lambda: Complex64, max_iter: usize) -> (bool, Option<usize>) {
    match critical_fate(lambda, max_iter, 0.0) {
        Fate::Escaped(k) => (false, Some(k)),
        _ => (true, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pq(p: i64, q: i64) -> IrreducibleRational {
        IrreducibleRational::new(p, q).unwrap()
    }

    #[test]
    fn quadratic_coordinate() {
        assert_eq!(c_of_lambda(c(1.0, 0.0)), c(0.25, 0.0));
        assert_eq!(c_of_lambda(c(-1.0, 0.0)), c(-0.75, 0.0));
        assert_eq!(c_of_lambda(c(2.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn rescaled_coordinate_examples() {
        assert!((big_lambda(pq(1, 2), c(-2.0, 0.0)).unwrap().value() - c(4f64.ln(), 0.0)).norm() < 1e-15);
        assert!(big_lambda(pq(1, 2), c(-1.0, 0.0)).unwrap().value().norm() < 1e-15);
        let far = big_lambda(pq(1, 2), c(-1.5, 0.0)).unwrap().value();
        assert!((far.re - 2.25f64.ln()).abs() < 1e-15 && yoccoz_disk_check(far));
    }

    #[test]
    fn branch_cut_and_domain() {
        assert_eq!(big_lambda(pq(1, 2), c(0.0, 1.5)), Err(Error::BranchCut));
        assert_eq!(big_lambda(pq(1, 2), c(-0.5, 0.0)), Err(Error::OutOfDomain));
    }

    #[test]
    fn principal_preimage_round_trip() {
        let r = pq(2, 5);
        let big = c(0.3, -0.4);
        let l = lambda_from_big(r, big);
        assert!((big_lambda(r, l).unwrap().value() - big).norm() < 1e-14);
    }

    #[test]
    fn membership_examples() {
        assert_eq!(membership(c(1.0, 0.0), 1000), (true, None));
        assert!(membership(c(0.0, 0.0), 10).0);
        let (inside, step) = membership(c(5.0, 0.0), 1000);
        assert!(!inside && step.is_some());
        assert!(membership(c(4.0, 0.0), 1000).0);
    }

    #[test]
    fn attracting_cycle_is_captured() {
        assert!(matches!(critical_fate(c(-1.2360679774997896, 0.0), 1000, 1e-10), Fate::Captured(p) if p % 2 == 0));
        assert!(matches!(critical_fate(c(0.5, 0.0), 1000, 1e-10), Fate::Captured(_)));
    }
}
