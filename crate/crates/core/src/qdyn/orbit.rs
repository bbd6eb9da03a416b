use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{escape_radius, Tolerances};
use crate::error::{Error, Result};

/// `P_lambda(z) = lambda z + z^2`.
#[inline]
pub fn step(lambda: Complex64, z: Complex64) -> Complex64 {
    lambda * z + z * z
}

/// `P^n(z)` together with `(P^n)'(z)`, without bookkeeping.
#[inline]
pub fn power_and_derivative(lambda: Complex64, mut z: Complex64, n: usize) -> (Complex64, Complex64) {
    let mut d = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        d *= lambda + 2.0 * z;
        z = step(lambda, z);
    }
    (z, d)
}

/// `P^n(z)`, `(P^n)'(z)` and `d/d lambda P^n(z)` for fixed `z`.
#[inline]
pub(crate) fn power_with_parameter_derivative(
    lambda: Complex64,
    mut z: Complex64,
    n: usize,
) -> (Complex64, Complex64, Complex64) {
    let mut d = Complex64::new(1.0, 0.0);
    let mut s = Complex64::new(0.0, 0.0);
    for _ in 0..n {
        let m = lambda + 2.0 * z;
        s = z + m * s;
        d *= m;
        z = step(lambda, z);
    }
    (z, d, s)
}

/// A finite forward orbit `z_0, ..., z_n` of `P_lambda`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub lambda: Complex64,
    pub points: Vec<Complex64>,
    /// `(P^n)'(z_0)`, the product of `P'` over `z_0 .. z_{n-1}`.
    pub derivative: Complex64,
}

pub fn iterate(lambda: Complex64, z0: Complex64, n: usize) -> Result<OrbitTrace> {
    let radius = escape_radius(lambda);
    let mut points = Vec::with_capacity(n + 1);
    let mut z = z0;
    let mut d = Complex64::new(1.0, 0.0);
    for k in 0..=n {
        if !(z.re.is_finite() && z.im.is_finite() && d.re.is_finite() && d.im.is_finite()) {
            return Err(Error::Overflow { step: k });
        }
        if z.norm() > radius {
            return Err(Error::Escaped { step: k });
        }
        points.push(z);
        if k < n {
            d *= lambda + 2.0 * z;
            z = step(lambda, z);
        }
    }
    Ok(OrbitTrace { lambda, points, derivative: d })
}

/// A periodic cycle of exact period `period`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub lambda: Complex64,
    pub period: usize,
    pub points: Vec<Complex64>,
    pub multiplier: Complex64,
}

/// Distance from `points[0]` to the nearest other cycle point or to the
/// fixed point `0`, used to keep continuation on the same branch.
pub(crate) fn separation(points: &[Complex64]) -> f64 {
    let z = points[0];
    points[1..]
        .iter()
        .map(|w| (w - z).norm())
        .fold(z.norm(), f64::min)
}

/// Proper divisors of `n`, smallest first.
pub(crate) fn proper_divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..n).filter(move |d| n % d == 0)
}

/// Fails with `WrongPeriod` when `z` already returns after a proper divisor.
pub(crate) fn check_exact_period(
    lambda: Complex64,
    z: Complex64,
    period: usize,
    tol: &Tolerances,
) -> Result<()> {
    for d in proper_divisors(period) {
        let (w, _) = power_and_derivative(lambda, z, d);
        if (w - z).norm() < tol.divisor_period {
            return Err(Error::WrongPeriod { divisor: d });
        }
    }
    Ok(())
}

/// Newton iteration on `P^period(z) - z` from `seed`.
pub(crate) fn newton_cycle_point(
    lambda: Complex64,
    period: usize,
    seed: Complex64,
    max_steps: usize,
    tol: &Tolerances,
) -> Result<Complex64> {
    let mut z = seed;
    let mut residual = f64::INFINITY;
    for _ in 0..max_steps {
        let (f, d) = power_and_derivative(lambda, z, period);
        let g = f - z;
        residual = g.norm();
        if !residual.is_finite() {
            break;
        }
        if residual < tol.newton_residual {
            return Ok(z);
        }
        let slope = d - 1.0;
        if slope.norm() == 0.0 {
            return Err(Error::SingularJacobian);
        }
        let delta = g / slope;
        z -= delta;
        if delta.norm() < tol.newton_step * (1.0 + z.norm()) {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence { steps: max_steps, residual })
}

/// Builds the cycle record through a converged point and validates it.
pub(crate) fn cycle_through(
    lambda: Complex64,
    period: usize,
    z: Complex64,
    tol: &Tolerances,
) -> Result<CycleRecord> {
    let trace = iterate(lambda, z, period)?;
    let residual = (trace.points[period] - z).norm();
    if residual >= tol.orbit {
        return Err(Error::NoConvergence { steps: tol.max_newton_steps, residual });
    }
    check_exact_period(lambda, z, period, tol)?;
    let mut points = trace.points;
    points.truncate(period);
    Ok(CycleRecord { lambda, period, points, multiplier: trace.derivative })
}

/// Locates a cycle of exact period `period` by Newton from `seed`.
pub fn find_periodic_orbit(
    lambda: Complex64,
    period: usize,
    seed: Complex64,
    tol: &Tolerances,
) -> Result<CycleRecord> {
    if period == 0 {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    let z = newton_cycle_point(lambda, period, seed, tol.max_newton_steps, tol)?;
    cycle_through(lambda, period, z, tol)
}
