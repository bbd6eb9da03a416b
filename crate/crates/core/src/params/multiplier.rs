use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::qdyn::{
    check_exact_period, cycle_through, power_and_derivative, power_with_parameter_derivative, separation,
    CycleRecord,
};
use crate::rational::IrreducibleRational;

/// A parameter together with the satellite cycle and its multiplier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSolution {
    pub pq: IrreducibleRational,
    pub lambda: Complex64,
    pub rho: Complex64,
    pub cycle: CycleRecord,
}

/// The `inner` sublimb of the satellite component with rotation `outer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublimbId {
    pub outer: IrreducibleRational,
    pub inner: IrreducibleRational,
}

impl SublimbId {
    pub fn new(outer: IrreducibleRational, inner: IrreducibleRational) -> Result<Self> {
        if inner.q() == 1 {
            return Err(Error::InvalidInput("the inner rotation must not be 0/1".into()));
        }
        Ok(Self { outer, inner })
    }
}

/// The degenerate record at the root itself, where the cycle has merged
/// into the fixed point `0`.
fn root_solution(pq: IrreducibleRational) -> MultiplierSolution {
    let q = pq.period();
    let zero = Complex64::new(0.0, 0.0);
    MultiplierSolution {
        pq,
        lambda: pq.root(),
        rho: Complex64::new(1.0, 0.0),
        cycle: CycleRecord { lambda: pq.root(), period: q, points: vec![zero; q], multiplier: Complex64::new(1.0, 0.0) },
    }
}

fn cycle_points(lambda: Complex64, z: Complex64, q: usize) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(q);
    let mut w = z;
    for _ in 0..q {
        pts.push(w);
        w = lambda * w + w * w;
    }
    pts
}

/// Newton in `z` for `P^q(z) = z`, stopping on a relative step criterion or
/// a residual at rounding level.
fn newton_z(lambda: Complex64, q: usize, seed: Complex64, max_steps: usize) -> Option<Complex64> {
    let mut z = seed;
    for _ in 0..max_steps {
        let (f, d) = power_and_derivative(lambda, z, q);
        if (f - z).norm() <= 4.0 * f64::EPSILON * z.norm() {
            return Some(z);
        }
        let delta = (f - z) / (d - 1.0);
        if !(delta.re.is_finite() && delta.im.is_finite()) {
            return None;
        }
        z -= delta;
        if delta.norm() <= 1e-14 * z.norm() || delta.norm() < 1e-300 {
            return Some(z);
        }
    }
    None
}

/// Follows a cycle point `z0` of period `q` at `lambda0` along the segment
/// to `lambda1`.
///
/// Steps are accepted when Newton converges, the corrected point stays close
/// to the tangent predictor, and it moves less than half the distance to the
/// nearest other cycle point or to the fixed point `0`.
pub(crate) fn track_cycle(
    q: usize,
    lambda0: Complex64,
    z0: Complex64,
    lambda1: Complex64,
    cfg: &Tolerances,
) -> Result<Complex64> {
    let total = lambda1 - lambda0;
    let mut z = z0;
    let mut s = 0.0;
    let mut h: f64 = 1.0;
    while s < 1.0 {
        h = h.min(1.0 - s);
        let la = lambda0 + total * s;
        let lb = lambda0 + total * (s + h);
        let (_, d, dl) = power_with_parameter_derivative(la, z, q);
        let pred = z - dl / (d - 1.0) * (lb - la);
        let sep = separation(&cycle_points(la, z, q));
        let accepted = newton_z(lb, q, pred, 30)
            .filter(|zb| (zb - z).norm() <= 0.5 * sep && (zb - pred).norm() <= 0.25 * sep);
        match accepted {
            Some(zb) => {
                z = zb;
                s += h;
                h *= 2.0;
            }
            None => {
                h /= 2.0;
                if h < cfg.continuation_min_step {
                    return Err(Error::ContinuationFailure { at: s, min_step: cfg.continuation_min_step });
                }
            }
        }
    }
    Ok(z)
}

/// `P^q(z)` with the partial derivatives needed by the `(lambda, z)` solver.
struct Jet {
    f: Complex64,
    d: Complex64,
    f_lambda: Complex64,
    d_z: Complex64,
    d_lambda: Complex64,
}

fn jet(lambda: Complex64, mut z: Complex64, q: usize) -> Jet {
    let one = Complex64::new(1.0, 0.0);
    let (mut d, mut s) = (one, Complex64::new(0.0, 0.0));
    let (mut dz, mut dl) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for _ in 0..q {
        let m = lambda + 2.0 * z;
        dz = dz * m + 2.0 * d * d;
        dl = dl * m + d * (one + 2.0 * s);
        s = z + m * s;
        d *= m;
        z = lambda * z + z * z;
    }
    Jet { f: z, d, f_lambda: s, d_z: dz, d_lambda: dl }
}

/// Newton in `(lambda, z)` for `P^q(z) = z`, `(P^q)'(z) = rho`.
fn newton_pair(
    q: usize,
    rho: Complex64,
    lambda0: Complex64,
    z0: Complex64,
    max_steps: usize,
    cfg: &Tolerances,
) -> Result<(Complex64, Complex64)> {
    let (mut lambda, mut z) = (lambda0, z0);
    let mut settled = false;
    for _ in 0..max_steps {
        let j = jet(lambda, z, q);
        let (g1, g2) = (j.f - z, j.d - rho);
        let (a, b, c, e) = (j.d - 1.0, j.f_lambda, j.d_z, j.d_lambda);
        let det = a * e - b * c;
        if det.norm() == 0.0 || !det.re.is_finite() {
            return Err(Error::SingularJacobian);
        }
        let dz = (g1 * e - b * g2) / det;
        let dl = (a * g2 - c * g1) / det;
        if !(dz.re.is_finite() && dl.re.is_finite() && dz.im.is_finite() && dl.im.is_finite()) {
            return Err(Error::SingularJacobian);
        }
        z -= dz;
        lambda -= dl;
        if settled {
            break;
        }
        // Near the root the steps jitter at a level set by the conditioning,
        // so a residual at rounding level also counts as settled.
        let at_rounding = g1.norm().max(g2.norm()) <= 8.0 * f64::EPSILON * (1.0 + rho.norm());
        settled = at_rounding
            || (dl.norm() <= 1e-13 * (1.0 + lambda.norm()) && dz.norm() <= 1e-11 * z.norm().max(1e-300));
    }
    let j = jet(lambda, z, q);
    let residual = (j.f - z).norm().max((j.d - rho).norm());
    if settled && residual < cfg.inversion_residual {
        Ok((lambda, z))
    } else {
        Err(Error::NoConvergence { steps: max_steps, residual })
    }
}

fn solution(pq: IrreducibleRational, lambda: Complex64, z: Complex64, cfg: &Tolerances) -> Result<MultiplierSolution> {
    let cycle = cycle_through(lambda, pq.period(), z, cfg)?;
    Ok(MultiplierSolution { pq, lambda, rho: cycle.multiplier, cycle })
}

/// Centre of the satellite component: the parameter where the critical
/// point `-lambda/2` has exact period `q`.
pub fn component_center(pq: IrreducibleRational, cfg: &Tolerances) -> Result<Complex64> {
    let q = pq.period();
    if q == 1 {
        return Ok(Complex64::new(2.0, 0.0));
    }
    let omega = pq.root();
    let mut last = Error::NoConvergence { steps: 0, residual: f64::INFINITY };
    for k in [1.0, 0.5, 2.0, 0.25] {
        let mut lambda = omega * (1.0 + k / (q * q) as f64);
        let mut converged = false;
        for _ in 0..cfg.max_newton_steps {
            let (f, d, fl) = power_with_parameter_derivative(lambda, -lambda / 2.0, q);
            let g = f + lambda / 2.0;
            let dg = fl - d / 2.0 + 0.5;
            let delta = g / dg;
            if !delta.re.is_finite() {
                break;
            }
            lambda -= delta;
            if delta.norm() < cfg.newton_step * (1.0 + lambda.norm()) {
                converged = true;
                break;
            }
        }
        if !converged {
            continue;
        }
        let angle_ok = (lambda / omega).arg().abs() < PI / (q * q) as f64;
        if lambda.norm() <= 1.0 || !angle_ok {
            continue;
        }
        match check_exact_period(lambda, -lambda / 2.0, q, cfg) {
            Ok(()) => return Ok(lambda),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Multiplier of the satellite `q`-cycle at `lambda`, continued from the
/// component centre along a straight segment.
pub fn multiplier_map(pq: IrreducibleRational, lambda: Complex64, cfg: &Tolerances) -> Result<MultiplierSolution> {
    if (lambda - pq.root()).norm() < 1e-14 {
        return Ok(root_solution(pq));
    }
    let center = component_center(pq, cfg)?;
    let z = track_cycle(pq.period(), center, -center / 2.0, lambda, cfg)?;
    solution(pq, lambda, z, cfg)
}

/// Solves for `(lambda, z)` with multiplier `rho` by Newton from `seed`.
pub fn invert_multiplier(
    pq: IrreducibleRational,
    rho: Complex64,
    seed: (Complex64, Complex64),
    cfg: &Tolerances,
) -> Result<MultiplierSolution> {
    if rho == Complex64::new(1.0, 0.0) {
        return Ok(root_solution(pq));
    }
    let (lambda, z) = newton_pair(pq.period(), rho, seed.0, seed.1, cfg.max_newton_steps, cfg)?;
    solution(pq, lambda, z, cfg)
}

/// Continues a solution along `rho = path(s)`, `s` from 0 to 1.
fn continue_in_rho(
    q: usize,
    start: (Complex64, Complex64),
    path: impl Fn(f64) -> Complex64,
    cfg: &Tolerances,
) -> Result<(Complex64, Complex64)> {
    let mut cur = start;
    let mut prev: Option<(f64, (Complex64, Complex64))> = None;
    let mut s = 0.0;
    let mut h: f64 = 0.05;
    while s < 1.0 {
        h = h.min(1.0 - s);
        let pred = match prev {
            Some((sp, (lp, zp))) => {
                let k = h / (s - sp);
                (cur.0 + (cur.0 - lp) * k, cur.1 + (cur.1 - zp) * k)
            }
            None => cur,
        };
        let sep = separation(&cycle_points(cur.0, cur.1, q));
        let next = newton_pair(q, path(s + h), pred.0, pred.1, 20, cfg)
            .ok()
            .filter(|(_, z)| (z - cur.1).norm() <= 0.5 * sep);
        match next {
            Some(x) => {
                prev = Some((s, cur));
                cur = x;
                s += h;
                h = (h * 1.5).min(0.25);
            }
            None => {
                h /= 2.0;
                if h < cfg.continuation_min_step {
                    return Err(Error::ContinuationFailure { at: s, min_step: cfg.continuation_min_step });
                }
            }
        }
    }
    Ok(cur)
}

/// The parameter where the satellite cycle has multiplier `rho`, found by
/// continuation from the component centre (`rho = 0`).
///
/// The path runs radially to `e^{i phi}` with `|phi| = pi/4` on the side of
/// `arg rho`, along the unit circle geometrically in the angle down to
/// `arg rho`, and radially again to `|rho|`. Targets far from `1` are
/// reached by a single radial segment.
pub fn solve_for_multiplier(pq: IrreducibleRational, rho: Complex64, cfg: &Tolerances) -> Result<MultiplierSolution> {
    let q = pq.period();
    if rho == Complex64::new(1.0, 0.0) {
        return Ok(root_solution(pq));
    }
    let center = component_center(pq, cfg)?;
    let start = (center, -center / 2.0);
    let (theta, r) = (rho.arg(), rho.norm());
    let (lambda, z) = if theta.abs() >= FRAC_PI_4 || theta == 0.0 {
        continue_in_rho(q, start, |s| rho * s, cfg)?
    } else {
        let anchor = FRAC_PI_4.copysign(theta);
        let radial = continue_in_rho(q, start, |s| Complex64::from_polar(s, anchor), cfg)?;
        let ratio = theta / anchor;
        let circular = continue_in_rho(q, radial, |s| Complex64::from_polar(1.0, anchor * ratio.powf(s)), cfg)?;
        if r == 1.0 {
            circular
        } else {
            continue_in_rho(q, circular, |s| Complex64::from_polar(1.0 + (r - 1.0) * s, theta), cfg)?
        }
    };
    solution(pq, lambda, z, cfg)
}

/// Root of the `inner` sublimb: the point of the satellite component's
/// boundary where the cycle multiplier is `e^{2 pi i p'/q'}`.
pub fn sublimb_root(id: SublimbId, cfg: &Tolerances) -> Result<MultiplierSolution> {
    let pq = id.outer;
    let center = component_center(pq, cfg)?;
    let target = id.inner.root();
    let (lambda, z) = continue_in_rho(pq.period(), (center, -center / 2.0), |s| target * s, cfg)?;
    solution(pq, lambda, z, cfg)
}
