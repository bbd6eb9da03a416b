use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::{circle_samples, contour_integrals};
use super::orbit::power_and_derivative;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::rational::IrreducibleRational;

/// Samples used for the clearance and logarithm checks on a contour.
const CHECK_SAMPLES: usize = 1024;

/// Contour invariants of a fixed point `z0` of `F = P_lambda^power`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointInvariants {
    pub lambda: Complex64,
    pub power: usize,
    pub z0: Complex64,
    pub multiplicity: i64,
    /// Raw value of the multiplicity integral before rounding.
    pub multiplicity_integral: Complex64,
    pub index: Complex64,
    /// `multiplicity / 2 - index`.
    pub resit: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

/// `min |F(w) - w|` and `max |F'(w) - 1|` over the check samples.
fn contour_scan(lambda: Complex64, power: usize, z0: Complex64, radius: f64) -> (f64, f64) {
    circle_samples(z0, radius, CHECK_SAMPLES).fold((f64::INFINITY, 0.0f64), |(lo, hi), w| {
        let (f, d) = power_and_derivative(lambda, w, power);
        (lo.min((f - w).norm()), hi.max((d - 1.0).norm()))
    })
}

fn check_fixed(lambda: Complex64, power: usize, z0: Complex64, cfg: &Tolerances) -> Result<()> {
    if power == 0 {
        return Err(Error::InvalidInput("power must be positive".into()));
    }
    let (f, _) = power_and_derivative(lambda, z0, power);
    if (f - z0).norm() >= cfg.orbit {
        return Err(Error::InvalidInput(format!("{z0} is not fixed by P^{power}")));
    }
    Ok(())
}

fn round_multiplicity(value: Complex64, cfg: &Tolerances) -> Result<i64> {
    let m = value.re.round();
    if (value - m).norm() > cfg.rounding {
        return Err(Error::RoundingAmbiguous { value: value.re });
    }
    Ok(m as i64)
}

/// Multiplicity and index integrals of the fixed point `z0` on a given circle.
pub fn fixed_point_invariants(
    lambda: Complex64,
    power: usize,
    z0: Complex64,
    radius: f64,
    cfg: &Tolerances,
) -> Result<FixedPointInvariants> {
    check_fixed(lambda, power, z0, cfg)?;
    let (clearance, _) = contour_scan(lambda, power, z0, radius);
    if clearance <= cfg.contour_clearance {
        return Err(Error::FixedPointOnContour { clearance });
    }
    let quad = contour_integrals(
        |w| {
            let (f, d) = power_and_derivative(lambda, w, power);
            let g = f - w;
            [(d - 1.0) / g, -1.0 / g]
        },
        z0,
        radius,
        cfg.quadrature,
        cfg,
    )?;
    let [mult, index] = quad.values;
    let multiplicity = round_multiplicity(mult, cfg)?;
    Ok(FixedPointInvariants {
        lambda,
        power,
        z0,
        multiplicity,
        multiplicity_integral: mult,
        index,
        resit: multiplicity as f64 / 2.0 - index,
        radius,
        nodes: quad.nodes,
    })
}

/// Multiplicity on the circle of radius `r`, when the circle is admissible.
fn probe_radius(lambda: Complex64, power: usize, z0: Complex64, r: f64, derivative_disk: bool, cfg: &Tolerances) -> Option<i64> {
    let (clearance, spread) = contour_scan(lambda, power, z0, r);
    if !(clearance > cfg.contour_clearance && (!derivative_disk || spread < 1.0)) {
        return None;
    }
    fixed_point_invariants(lambda, power, z0, r, cfg).ok().map(|inv| inv.multiplicity)
}

/// Shrink factor of the confirming circle in [`select_radius`].
const CONFIRM: f64 = 0.75;

/// Largest admissible radius around `z0` for `F = P_lambda^power`.
///
/// Radii `radius_start / 2^k` are tried in turn. A radius is admissible when
/// the contour keeps clear of fixed points, when (for `derivative_disk`)
/// `|F' - 1| < 1` on it, and when the circle of `3/4` the radius is also
/// admissible and encloses the same number of fixed points.
pub fn select_radius(
    lambda: Complex64,
    power: usize,
    z0: Complex64,
    derivative_disk: bool,
    cfg: &Tolerances,
) -> Result<f64> {
    let mut r = cfg.radius_start;
    while r >= cfg.radius_floor {
        if let Some(m) = probe_radius(lambda, power, z0, r, derivative_disk, cfg) {
            if probe_radius(lambda, power, z0, CONFIRM * r, derivative_disk, cfg) == Some(m) {
                return Ok(r);
            }
        }
        r /= 2.0;
    }
    Err(Error::NoAdmissibleRadius)
}

/// [`fixed_point_invariants`] on the radius chosen by [`select_radius`].
pub fn fixed_point_invariants_auto(
    lambda: Complex64,
    power: usize,
    z0: Complex64,
    cfg: &Tolerances,
) -> Result<FixedPointInvariants> {
    check_fixed(lambda, power, z0, cfg)?;
    let r = select_radius(lambda, power, z0, false, cfg)?;
    fixed_point_invariants(lambda, power, z0, r, cfg)
}

/// `(resit(F), n * resit(F^n))` for `F = P_lambda^base` at `z0`.
///
/// The two agree whenever `F'(z0)` is a primitive root of unity whose order
/// divides `n`.
pub fn resit_iterate_check(
    lambda: Complex64,
    base: usize,
    n: usize,
    z0: Complex64,
    cfg: &Tolerances,
) -> Result<(Complex64, Complex64)> {
    let single = fixed_point_invariants_auto(lambda, base, z0, cfg)?;
    let iterated = fixed_point_invariants_auto(lambda, base * n, z0, cfg)?;
    Ok((single.resit, n as f64 * iterated.resit))
}

/// `(D - 1) / Log D`, continued by its series where `D` is close to 1.
#[inline]
fn log_quotient(d: Complex64) -> Complex64 {
    let u = d - 1.0;
    if u.norm() < 1e-6 {
        1.0 + u / 2.0 - u * u / 12.0
    } else {
        u / d.ln()
    }
}

/// Value of the holomorphic function `H` built from the contour integral of
/// `(F' - 1) / ((F - w) Log F')` with `F = P_lambda^q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuffValue {
    pub value: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

/// Contour radius for `H` at the root `e^{2 pi i p/q}`.
pub fn buff_radius(pq: IrreducibleRational, cfg: &Tolerances) -> Result<f64> {
    select_radius(pq.root(), pq.period(), Complex64::new(0.0, 0.0), true, cfg)
}

/// `H(Lambda)` at `lambda = e^{2 pi i p/q} e^{Lambda/q}`.
///
/// The contour must enclose exactly `q + 1` fixed points of `F` and keep
/// `F'` inside the disk `|F' - 1| < 1`. With `radius = None` the radius
/// chosen at the root is used when it qualifies at `lambda`; otherwise
/// radii `radius_start (3/4)^k` are searched for one that does.
pub fn buff_h(
    pq: IrreducibleRational,
    big_lambda: Complex64,
    radius: Option<f64>,
    cfg: &Tolerances,
) -> Result<BuffValue> {
    if let Some(r) = radius {
        return buff_h_on(pq, big_lambda, r, cfg);
    }
    let root_radius = buff_radius(pq, cfg)?;
    let first = buff_h_on(pq, big_lambda, root_radius, cfg);
    if first.is_ok() || big_lambda.norm() == 0.0 {
        return first;
    }
    let mut r = cfg.radius_start;
    while r >= cfg.radius_floor {
        if r != root_radius {
            if let Ok(v) = buff_h_on(pq, big_lambda, r, cfg) {
                return Ok(v);
            }
        }
        r *= CONFIRM;
    }
    first
}

fn buff_h_on(pq: IrreducibleRational, big_lambda: Complex64, radius: f64, cfg: &Tolerances) -> Result<BuffValue> {
    let q = pq.period();
    let lambda = pq.root() * (big_lambda / q as f64).exp();
    let z0 = Complex64::new(0.0, 0.0);
    let (clearance, spread) = contour_scan(lambda, q, z0, radius);
    if clearance <= cfg.contour_clearance {
        return Err(Error::FixedPointOnContour { clearance });
    }
    if spread >= 1.0 {
        return Err(Error::LogBranchViolation);
    }
    let quad = contour_integrals(
        |w| {
            let (f, d) = power_and_derivative(lambda, w, q);
            let g = f - w;
            [(d - 1.0) / g, log_quotient(d) / g]
        },
        z0,
        radius,
        cfg.quadrature,
        cfg,
    )?;
    let [mult, value] = quad.values;
    let found = round_multiplicity(mult, cfg)?;
    let expected = q as i64 + 1;
    if found != expected {
        return Err(Error::ContourEnclosure { expected, found });
    }
    Ok(BuffValue { value, radius, nodes: quad.nodes })
}
