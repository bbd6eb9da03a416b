use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cf::{bezout_pair, convergents, simplest_rational_between};
use super::metric::{dist_hr, MobiusA};
use super::modulus::parallelogram_modulus;
use crate::error::{Error, Result};

/// Integers `(p, q, r, s)` naming the parallelogram
/// `Q(q L - p 2 pi i, s L - r 2 pi i)` for any `L` in the right half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeQuadruple {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
}

impl LatticeQuadruple {
    pub fn sides(&self, l: Complex64) -> (Complex64, Complex64) {
        let two_pi_i = Complex64::new(0.0, TAU);
        (
            self.q as f64 * l - self.p as f64 * two_pi_i,
            self.s as f64 * l - self.r as f64 * two_pi_i,
        )
    }
}

/// Relative position of two points with respect to the geodesic through them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClaimCase {
    /// Equal imaginary parts: the geodesic is a horizontal ray.
    I,
    /// The geodesic ends at `2 pi i y` with `y` rational.
    IIA,
    /// The geodesic ends at `2 pi i y` with `y` irrational.
    IIB,
}

/// A validated quadruple with the moduli that certify it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadrupleWitness {
    pub quadruple: LatticeQuadruple,
    pub case: ClaimCase,
    pub transform: MobiusA,
    pub mod1: f64,
    pub mod2: f64,
    pub log_ratio: f64,
    pub dist: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Continued-fraction depth.
    pub max_depth: usize,
    /// Finite-element grid used for the moduli.
    pub grid: usize,
    /// Largest denominator treated as an exact rational endpoint.
    pub rational_denominator: i64,
    /// Parallelograms with side ratio or inverse angle sine above this are
    /// beyond what the modulus grid resolves and are skipped.
    pub max_aspect: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { max_depth: 40, grid: 32, rational_denominator: 1000, max_aspect: 64.0 }
    }
}

/// Centre `i c` and radius of the geodesic circle through two points with
/// different imaginary parts.
fn geodesic_circle(l1: Complex64, l2: Complex64) -> (f64, f64) {
    let c = (l1.norm_sqr() - l2.norm_sqr()) / (2.0 * (l1.im - l2.im));
    (c, (l1 - Complex64::new(0.0, c)).norm())
}

fn same_height(l1: Complex64, l2: Complex64) -> bool {
    (l1.im - l2.im).abs() <= 1e-12 * (1.0 + l1.norm().max(l2.norm()))
}

/// Case and candidate normalising transforms for the pair.
fn transforms(l1: Complex64, l2: Complex64, cfg: &SearchConfig) -> Vec<(ClaimCase, MobiusA)> {
    if same_height(l1, l2) {
        return vec![(ClaimCase::I, MobiusA::IDENTITY)];
    }
    let (c, r) = geodesic_circle(l1, l2);
    let mut out = Vec::new();
    for y in [(c + r) / TAU, (c - r) / TAU] {
        let cf = convergents(y, cfg.max_depth);
        let Some(&(u, v)) = cf.last() else { continue };
        let exact = v <= cfg.rational_denominator && (y - u as f64 / v as f64).abs() < 1e-12 * y.abs().max(1.0);
        let (case, list) = if exact { (ClaimCase::IIA, vec![(u, v)]) } else { (ClaimCase::IIB, cf) };
        for (u, v) in list {
            if let Some((m, n)) = bezout_pair(u, v) {
                out.push((case, MobiusA { m, n, u, v }));
            }
        }
    }
    out
}

/// Case of the pair, as decided by the geodesic through it.
pub fn claim_case(l1: Complex64, l2: Complex64) -> ClaimCase {
    transforms(l1, l2, &SearchConfig::default())
        .first()
        .map(|t| t.0)
        .unwrap_or(ClaimCase::IIB)
}

/// Pulls the normalised vector `x h - y 2 pi i` back to coefficients
/// `(p, q)` of `q L - p 2 pi i`.
fn pull_back(t: &MobiusA, x: i64, y: i64) -> Option<(i64, i64)> {
    let q = x.checked_mul(t.n)?.checked_add(y.checked_mul(t.v)?)?;
    let p = x.checked_mul(t.m)?.checked_add(y.checked_mul(t.u)?)?;
    Some((p, q))
}

fn normalised(first: (i64, i64), second: (i64, i64)) -> Option<LatticeQuadruple> {
    let (mut p, mut q) = first;
    let (mut r, mut s) = second;
    if q < 0 {
        (p, q) = (-p, -q);
    }
    if s < 0 || (s == 0 && r < 0) {
        (r, s) = (-r, -s);
    }
    (q > 0 && (p, q) != (r, s)).then_some(LatticeQuadruple { p, q, r, s })
}

/// Candidate quadruples for a transform, as pairs of normalised vectors
/// `(x, y)` meaning `x h - y 2 pi i`.
fn candidates(t: &MobiusA, h1: Complex64, h2: Complex64, cfg: &SearchConfig) -> Vec<LatticeQuadruple> {
    let (y1, y2) = (h1.im / TAU, h2.im / TAU);
    let (lo, hi) = (y1.min(y2), y1.max(y2));
    let mut fractions: Vec<(i64, i64)> = simplest_rational_between(lo, hi).into_iter().collect();
    fractions.extend(convergents(0.5 * (lo + hi), cfg.max_depth));
    fractions.dedup();
    // Near-rectangles in normalised coordinates: the first orientation has
    // modulus ratio Re h2 / Re h1, the second Re h1 / Re h2.
    let prefer_wide = h1.re >= h2.re;
    let mut out = Vec::new();
    for (a, b) in fractions {
        if b <= 0 {
            continue;
        }
        let tall = [((b, a), (0, 1))];
        let wide: Vec<((i64, i64), (i64, i64))> = if t.v != 0 {
            vec![((0, 1), (b, a))]
        } else {
            // The side must involve L, so tilt 2 pi i by a large multiple.
            let k0 = (8.0 * b as f64 * h1.re.max(h2.re) / TAU).ceil().max(1.0) as i64;
            vec![((b, a + k0), (b, a)), ((b, a + 4 * k0), (b, a))]
        };
        let order: Vec<_> = if prefer_wide {
            wide.into_iter().chain(tall).collect()
        } else {
            tall.into_iter().chain(wide).collect()
        };
        for ((x1, z1), (x2, z2)) in order {
            let (Some(first), Some(second)) = (pull_back(t, x1, z1), pull_back(t, x2, z2)) else {
                continue;
            };
            if let Some(quad) = normalised(first, second) {
                out.push(quad);
            }
        }
    }
    out
}

fn resolvable(va: Complex64, vb: Complex64, max_aspect: f64) -> bool {
    let (a, b) = (va.norm(), vb.norm());
    let sine = (va.conj() * vb).im.abs() / (a * b);
    a.max(b) <= max_aspect * a.min(b) && sine * max_aspect >= 1.0
}

/// Searches for integers `(p, q, r, s)` such that
/// `log(Mod Q1 / Mod Q2) >= d_Hr(L1, L2) - eps`, where `Qj` is the
/// parallelogram of the quadruple at `Lj`.
///
/// Exact moduli also satisfy `log(Mod Q1 / Mod Q2) <= d_Hr(L1, L2)`, so a
/// computed ratio above `d + eps` is treated as a discretisation failure.
pub fn quadruple_search(l1: Complex64, l2: Complex64, eps: f64, cfg: &SearchConfig) -> Result<QuadrupleWitness> {
    let dist = dist_hr(l1, l2)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    for (case, t) in transforms(l1, l2, cfg) {
        let (Ok(h1), Ok(h2)) = (t.apply(l1), t.apply(l2)) else { continue };
        if !(h1.re > 0.0 && h2.re > 0.0) {
            continue;
        }
        for quad in candidates(&t, h1, h2, cfg) {
            let (a1, b1) = quad.sides(l1);
            let (a2, b2) = quad.sides(l2);
            if !(resolvable(a1, b1, cfg.max_aspect) && resolvable(a2, b2, cfg.max_aspect)) {
                continue;
            }
            let (Ok(mod1), Ok(mod2)) = (
                parallelogram_modulus(a1, b1, cfg.grid),
                parallelogram_modulus(a2, b2, cfg.grid),
            ) else {
                continue;
            };
            let log_ratio = (mod1 / mod2).ln();
            if log_ratio >= dist - eps && log_ratio <= dist + eps {
                return Ok(QuadrupleWitness { quadruple: quad, case, transform: t, mod1, mod2, log_ratio, dist });
            }
        }
    }
    Err(Error::SearchExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_pair_gives_rectangles() {
        let w = quadruple_search(c(1.0, 0.0), c(2.0, 0.0), 0.1, &SearchConfig::default()).unwrap();
        assert_eq!(w.case, ClaimCase::I);
        assert!((w.log_ratio - 2f64.ln()).abs() < 0.01 * 2f64.ln());
    }

    #[test]
    fn reversed_pair_uses_other_orientation() {
        let w = quadruple_search(c(2.0, 0.0), c(1.0, 0.0), 0.1, &SearchConfig::default()).unwrap();
        assert!(w.log_ratio >= 2f64.ln() - 0.1);
        assert!(w.quadruple.q > 0 && w.quadruple.s >= 0);
    }

    #[test]
    fn witnesses_respect_the_teichmuller_bound() {
        let r = TAU * 0.6180339887498949;
        let pairs = [
            (Complex64::from_polar(r, 0.5), Complex64::from_polar(r, -0.2)),
            (c(0.3, 0.7), c(1.1, -0.2)),
            (c(4.0, 9.0), c(0.2, -7.0)),
        ];
        for (a, b) in pairs {
            let w = quadruple_search(a, b, 0.1, &SearchConfig::default()).unwrap();
            assert!(w.log_ratio >= w.dist - 0.1 && w.log_ratio <= w.dist + 0.1, "{w:?}");
        }
    }

    #[test]
    fn geodesic_circle_through_points() {
        let (l1, l2) = (c(1.0, 0.5), c(0.3, -1.2));
        let (cc, r) = geodesic_circle(l1, l2);
        assert!(((l1 - c(0.0, cc)).norm() - r).abs() < 1e-12);
        assert!(((l2 - c(0.0, cc)).norm() - r).abs() < 1e-12);
    }

    #[test]
    fn case_classification() {
        assert_eq!(claim_case(c(1.0, 3.0), c(2.0, 3.0)), ClaimCase::I);
        let (a, b) = (Complex64::from_polar(std::f64::consts::PI, 0.3), Complex64::from_polar(std::f64::consts::PI, -0.4));
        assert_eq!(claim_case(a, b), ClaimCase::IIA);
        let r = TAU * 0.6180339887498949;
        assert_eq!(claim_case(Complex64::from_polar(r, 0.5), Complex64::from_polar(r, -0.2)), ClaimCase::IIB);
    }
}
