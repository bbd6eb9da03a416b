use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::multiplier::{sublimb_root, track_cycle, SublimbId};
use super::{critical_fate, log_lambda_power, Fate};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::hgeom::dist_hr;
use crate::qdyn::power_and_derivative;
use crate::raster::Mask;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimbScanConfig {
    /// Pixels per side of the final scan.
    pub resolution: usize,
    /// Pixels per side while the window is being adjusted.
    pub coarse_resolution: usize,
    pub max_iter: usize,
    /// Relative return distance that counts as capture by a cycle.
    pub capture_tol: f64,
    /// The first window has half-width `4 * window_constant / q'`.
    pub window_constant: f64,
    /// Window adjustments allowed before the final scan.
    pub max_refinements: usize,
}

impl Default for LimbScanConfig {
    fn default() -> Self {
        Self {
            resolution: 512,
            coarse_resolution: 128,
            max_iter: 100_000,
            capture_tol: 1e-10,
            window_constant: 6.0,
            max_refinements: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimbDiameters {
    pub id: SublimbId,
    pub root: Complex64,
    pub euclid: f64,
    pub hyp: f64,
    pub half_width: f64,
    pub resolution: usize,
    pub pixels: usize,
    pub boundary_pixels: usize,
}

struct Window {
    center: Complex64,
    half_width: f64,
    n: usize,
}

impl Window {
    fn pixel(&self, i: usize, j: usize) -> Complex64 {
        let n = self.n as f64;
        let x = (2.0 * i as f64 + 1.0) / n - 1.0;
        let y = 1.0 - (2.0 * j as f64 + 1.0) / n;
        self.center + self.half_width * Complex64::new(x, y)
    }

    fn pixel_size(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }
}

struct Scanner<'a> {
    id: SublimbId,
    root: Complex64,
    root_z: Complex64,
    root_rho: Complex64,
    sector: f64,
    cfg: &'a LimbScanConfig,
    tol: &'a Tolerances,
}

impl Scanner<'_> {
    /// Whether the satellite cycle at `lambda` is repelling with multiplier
    /// inside the Farey sector of the inner rotation number.
    fn in_wake(&self, lambda: Complex64) -> bool {
        let q = self.id.outer.period();
        let Ok(z) = track_cycle(q, self.root, self.root_z, lambda, self.tol) else {
            return false;
        };
        let (_, rho) = power_and_derivative(lambda, z, q);
        rho.norm() > 1.0 && (rho / self.root_rho).arg().abs() <= self.sector
    }

    fn marked(&self, lambda: Complex64) -> bool {
        self.in_wake(lambda)
            && matches!(critical_fate(lambda, self.cfg.max_iter, self.cfg.capture_tol), Fate::Captured(_))
    }

    fn scan(&self, w: &Window) -> Mask {
        let bits: Vec<bool> = (0..w.n * w.n)
            .into_par_iter()
            .map(|k| self.marked(w.pixel(k % w.n, k / w.n)))
            .collect();
        Mask { width: w.n, height: w.n, bits }
    }

    /// The marked component attached to the root: pixels within two of the
    /// root, or failing that the marked pixel nearest to it within an
    /// eighth of the window.
    fn component(&self, w: &Window, marks: &Mask) -> Mask {
        let half = w.n / 2;
        let near: Vec<(usize, usize)> = (half.saturating_sub(2)..(half + 2).min(w.n))
            .flat_map(|j| (half.saturating_sub(2)..(half + 2).min(w.n)).map(move |i| (i, j)))
            .filter(|&(i, j)| marks.get(i, j))
            .collect();
        if !near.is_empty() {
            return marks.components_from(&near);
        }
        let reach = (w.n / 8).max(2) as f64 * w.pixel_size();
        let nearest = marks
            .iter_set()
            .map(|(i, j)| ((w.pixel(i, j) - self.root).norm(), (i, j)))
            .filter(|(d, _)| *d <= reach)
            .min_by(|a, b| a.0.total_cmp(&b.0));
        match nearest {
            Some((_, seed)) => marks.components_from(&[seed]),
            None => Mask::new(w.n, w.n),
        }
    }
}

/// Euclidean and hyperbolic diameters of a sublimb, estimated from a pixel
/// scan around its root.
///
/// A pixel is counted when the satellite cycle is repelling with multiplier
/// in the sector `|arg(rho / rho_root)| <= pi / q'^2` and the critical orbit
/// is captured by an attracting cycle within the iteration budget. The
/// connected set of such pixels attached to the root is measured over its
/// boundary pixels and the root itself. The window starts at half-width
/// `4 C / q'` and is narrowed until the limb fills a fair part of it.
pub fn sublimb_diameter(id: SublimbId, cfg: &LimbScanConfig, tol: &Tolerances) -> Result<LimbDiameters> {
    let root = sublimb_root(id, tol)?;
    let qi = id.inner.q() as f64;
    let scanner = Scanner {
        id,
        root: root.lambda,
        root_z: root.cycle.points[0],
        root_rho: root.rho,
        sector: PI / (qi * qi),
        cfg,
        tol,
    };
    let mut half_width = 4.0 * cfg.window_constant / qi;
    for level in 0..=cfg.max_refinements {
        let last = level == cfg.max_refinements;
        let n = if last { cfg.resolution } else { cfg.coarse_resolution.min(cfg.resolution) };
        let w = Window { center: root.lambda, half_width, n };
        let comp = scanner.component(&w, &scanner.scan(&w));
        if comp.count() == 0 {
            if last {
                return Err(Error::RootNotMember);
            }
            half_width /= 4.0;
            continue;
        }
        let extent = comp
            .iter_set()
            .map(|(i, j)| (w.pixel(i, j) - root.lambda).norm())
            .fold(0.0, f64::max)
            + w.pixel_size();
        if !last && extent < half_width / 4.0 {
            half_width = (1.5 * extent).max(half_width / 16.0);
            continue;
        }
        if !last && comp.touches_edge() {
            half_width *= 2.0;
            continue;
        }
        let (w, comp) = if n == cfg.resolution {
            (w, comp)
        } else {
            let w = Window { center: root.lambda, half_width, n: cfg.resolution };
            let comp = scanner.component(&w, &scanner.scan(&w));
            if comp.count() == 0 {
                return Err(Error::RootNotMember);
            }
            (w, comp)
        };
        return Ok(measure(id, root.lambda, &w, &comp));
    }
    Err(Error::RootNotMember)
}

fn measure(id: SublimbId, root: Complex64, w: &Window, comp: &Mask) -> LimbDiameters {
    let boundary = comp.boundary();
    let mut points: Vec<Complex64> = boundary.iter_set().map(|(i, j)| w.pixel(i, j)).collect();
    points.push(root);
    let q = id.outer.period();
    let bigs: Vec<Complex64> = points
        .iter()
        .filter_map(|&l| log_lambda_power(q, l).ok())
        .filter(|b| b.re > 0.0)
        .collect();
    let euclid = max_pairwise(&points, |a, b| Some((a - b).norm()));
    let hyp = max_pairwise(&bigs, |a, b| dist_hr(a, b).ok());
    LimbDiameters {
        id,
        root,
        euclid,
        hyp,
        half_width: w.half_width,
        resolution: w.n,
        pixels: comp.count(),
        boundary_pixels: boundary.count(),
    }
}

fn max_pairwise(points: &[Complex64], d: impl Fn(Complex64, Complex64) -> Option<f64> + Sync) -> f64 {
    (0..points.len())
        .into_par_iter()
        .map(|a| {
            points[a + 1..]
                .iter()
                .filter_map(|&b| d(points[a], b))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}
