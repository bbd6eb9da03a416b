use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Outcome of a trapezoid evaluation of several contour integrals at once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<const K: usize> {
    pub values: [Complex64; K],
    pub nodes: usize,
}

#[inline]
fn node(center: Complex64, radius: f64, k: usize, n: usize) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * k as f64 / n as f64).sin_cos();
    center + radius * Complex64::new(c, s)
}

/// Sum of `f(w_k) (w_k - center)` over the nodes `k = first, first + stride, ...`
/// of the `n`-point grid.
fn partial_sum<const K: usize, F>(
    f: &F,
    center: Complex64,
    radius: f64,
    n: usize,
    first: usize,
    stride: usize,
) -> Result<[Complex64; K]>
where
    F: Fn(Complex64) -> [Complex64; K],
{
    let mut acc = [Complex64::new(0.0, 0.0); K];
    let mut k = first;
    while k < n {
        let w = node(center, radius, k, n);
        let vals = f(w);
        for (a, v) in acc.iter_mut().zip(vals) {
            let term = v * (w - center);
            if !(term.re.is_finite() && term.im.is_finite()) {
                return Err(Error::NonFiniteIntegrand);
            }
            *a += term;
        }
        k += stride;
    }
    Ok(acc)
}

/// `(1/2 pi i) \oint f(w) dw` over the circle `|w - center| = radius` for a
/// vector of integrands, by the trapezoid rule with node doubling.
///
/// Each doubling evaluates only the new odd-indexed nodes. Refinement stops
/// when every component changes by less than `tol * (1 + |I|)`.
pub fn contour_integrals<const K: usize, F>(
    f: F,
    center: Complex64,
    radius: f64,
    tol: f64,
    cfg: &Tolerances,
) -> Result<Quadrature<K>>
where
    F: Fn(Complex64) -> [Complex64; K],
{
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!("contour radius {radius}")));
    }
    let mut n = cfg.quadrature_min_nodes.max(4);
    let mut sum = partial_sum(&f, center, radius, n, 0, 1)?;
    let mut estimate = sum.map(|s| s / n as f64);
    let mut change = f64::INFINITY;
    while 2 * n <= cfg.quadrature_max_nodes {
        let odd = partial_sum(&f, center, radius, 2 * n, 1, 2)?;
        for (s, o) in sum.iter_mut().zip(odd) {
            *s += o;
        }
        n *= 2;
        let refined = sum.map(|s| s / n as f64);
        let settled = estimate.iter().zip(&refined).all(|(a, b)| {
            let c = (b - a).norm();
            c < tol * (1.0 + b.norm())
        });
        change = estimate
            .iter()
            .zip(&refined)
            .map(|(a, b)| (b - a).norm())
            .fold(0.0, f64::max);
        estimate = refined;
        if settled {
            return Ok(Quadrature { values: estimate, nodes: n });
        }
    }
    Err(Error::NoQuadratureConvergence { nodes: n, change })
}

/// Scalar form of [`contour_integrals`].
pub fn contour_integral<F>(
    f: F,
    center: Complex64,
    radius: f64,
    tol: f64,
    cfg: &Tolerances,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    contour_integrals(|w| [f(w)], center, radius, tol, cfg).map(|q| q.values[0])
}

/// `n` equally spaced points of the circle.
pub(crate) fn circle_samples(center: Complex64, radius: f64, n: usize) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |k| node(center, radius, k, n))
}
