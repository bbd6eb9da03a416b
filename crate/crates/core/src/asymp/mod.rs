//! Quantitative experiments near a satellite root: the residue `Res_{p/q}`,
//! the expansion of `Lambda` in the logarithm of the multiplier, the
//! divergence of hyperbolic distances between different satellites, the
//! smallness of sublimbs and the divergence along sublimb roots.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::hgeom::dist_hr;
use crate::params::{
    big_lambda, lambda_from_big, multiplier_map, solve_for_multiplier, sublimb_diameter, sublimb_root,
    HalfPlanePoint, LimbScanConfig, SublimbId,
};
use crate::qdyn::buff_h;
use crate::rational::IrreducibleRational;

/// `Lambda(e^{it})`: the rescaled coordinate of the parameter where the
/// satellite cycle has multiplier `e^{it}`.
pub fn lambda_of_t(pq: IrreducibleRational, t: f64, cfg: &Tolerances) -> Result<HalfPlanePoint> {
    if !(t != 0.0 && t.abs() <= FRAC_PI_4) {
        return Err(Error::InvalidInput(format!("t = {t} outside 0 < |t| <= pi/4")));
    }
    let sol = solve_for_multiplier(pq, Complex64::from_polar(1.0, t), cfg)?;
    big_lambda(pq, sol.lambda)
}

/// `Res_{p/q}`, the iterative residue of `P^q` at the parabolic root,
/// computed as `H(0)`.
pub fn residue_contour(pq: IrreducibleRational, cfg: &Tolerances) -> Result<Complex64> {
    if pq.q() > 7 {
        return Err(Error::InvalidInput(format!("q = {} exceeds 7", pq.q())));
    }
    Ok(buff_h(pq, Complex64::new(0.0, 0.0), None, cfg)?.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub pq: IrreducibleRational,
    pub res_contour: Complex64,
    pub res_fit: Complex64,
    /// Coefficient of the linear correction term in the fit.
    pub res1_fit: Complex64,
    /// Root-mean-square misfit of the linear model.
    pub fit_residual: f64,
    pub points: usize,
}

impl ResidueReport {
    pub fn relative_gap(&self) -> f64 {
        (self.res_fit - self.res_contour).norm() / self.res_contour.norm()
    }
}

/// `n` logarithmically spaced values from `hi` down to `lo`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![hi],
        _ => (0..n)
            .map(|k| (hi.ln() + (lo.ln() - hi.ln()) * k as f64 / (n - 1) as f64).exp())
            .collect(),
    }
}

/// The default fit window: 12 points from `1e-2` down to `1e-4`.
pub fn default_fit_grid() -> Vec<f64> {
    log_grid(1e-4, 1e-2, 12)
}

/// Fits `-(Lambda + x) / x^2 = Res + c x` with `x = i t / q` by complex
/// least squares, and compares with the contour value.
pub fn residue_fit(pq: IrreducibleRational, ts: &[f64], cfg: &Tolerances) -> Result<ResidueReport> {
    if ts.len() < 6 {
        return Err(Error::IllConditionedFit { points: ts.len() });
    }
    if ts.iter().any(|t| !(1e-4 * (1.0 - 1e-12)..=1e-1).contains(t)) {
        return Err(Error::InvalidInput("fit points must lie in [1e-4, 1e-1]".into()));
    }
    let q = pq.q() as f64;
    let samples: Vec<(Complex64, Complex64)> = ts
        .par_iter()
        .map(|&t| {
            let big = lambda_of_t(pq, t, cfg)?.value();
            let x = Complex64::new(0.0, t / q);
            Ok((x, -(big + x) / (x * x)))
        })
        .collect::<Result<_>>()?;
    let n = samples.len() as f64;
    let (mut sx, mut sxx, mut sy, mut sxy) = (Complex64::new(0.0, 0.0), 0.0, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for &(x, y) in &samples {
        sx += x;
        sxx += x.norm_sqr();
        sy += y;
        sxy += x.conj() * y;
    }
    // Normal equations [[n, sx], [conj sx, sxx]] [R, c] = [sy, sxy].
    let det = n * sxx - sx.norm_sqr();
    if !(det > 1e-12 * n * sxx) {
        return Err(Error::IllConditionedFit { points: samples.len() });
    }
    let res_fit = (sxx * sy - sx * sxy) / det;
    let res1_fit = (n * sxy - sx.conj() * sy) / det;
    let misfit = samples
        .iter()
        .map(|&(x, y)| (y - res_fit - res1_fit * x).norm_sqr())
        .sum::<f64>()
        / n;
    Ok(ResidueReport {
        pq,
        res_contour: residue_contour(pq, cfg)?,
        res_fit,
        res1_fit,
        fit_residual: misfit.sqrt(),
        points: samples.len(),
    })
}

/// One row of a divergence scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub t: f64,
    pub lambda: HalfPlanePoint,
    pub m: HalfPlanePoint,
    pub dist: f64,
    /// `2 log(|Q - q| / t)`.
    pub bound: f64,
    /// `2 log((Q - q) / t)`, `NaN` unless `Q > q`.
    pub bound_ordered: f64,
}

/// `d(Lambda(e^{it}), M(e^{it}))` for the satellites `p/q` and `P/Q` along
/// `t_grid`, in input order.
pub fn divergence_scan(
    pq: IrreducibleRational,
    big_pq: IrreducibleRational,
    t_grid: &[f64],
    cfg: &Tolerances,
) -> Result<Vec<ExperimentRecord>> {
    let gap = big_pq.q() - pq.q();
    t_grid
        .par_iter()
        .map(|&t| {
            if !(t > 0.0) {
                return Err(Error::InvalidInput(format!("t = {t} must be positive")));
            }
            let lambda = lambda_of_t(pq, t, cfg)?;
            let m = lambda_of_t(big_pq, t, cfg)?;
            Ok(ExperimentRecord {
                t,
                lambda,
                m,
                dist: dist_hr(lambda.value(), m.value())?,
                bound: 2.0 * (gap.abs() as f64 / t).ln(),
                bound_ordered: if gap > 0 { 2.0 * (gap as f64 / t).ln() } else { f64::NAN },
            })
        })
        .collect()
}

/// The rotation number `(n^2 - 1) / n^3` of the sublimbs used for the limb
/// experiments.
pub fn inner_rotation(n: i64) -> Result<IrreducibleRational> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n = {n} must be at least 2")));
    }
    IrreducibleRational::new(n * n - 1, n * n * n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimbScanRecord {
    pub n: i64,
    pub root_lambda: HalfPlanePoint,
    /// `Re(Res_{p/q}) 4 pi^2 / (q^2 n^2)`.
    pub re_lower_bound: f64,
    /// `Re(root Lambda) n^2 q^2 / (4 pi^2)`, which tends to `Re(Res_{p/q})`.
    pub scaled_root: f64,
    pub hyp_diam: f64,
    pub euclid_diam: f64,
}

/// Root position and diameters of the `(n^2 - 1)/n^3` sublimbs of the
/// satellite `p/q`.
pub fn small_limb_scan(
    pq: IrreducibleRational,
    ns: &[i64],
    scan: &LimbScanConfig,
    cfg: &Tolerances,
) -> Result<Vec<LimbScanRecord>> {
    let res = residue_contour(pq, cfg)?;
    let q = pq.q() as f64;
    ns.iter()
        .map(|&n| {
            let id = SublimbId::new(pq, inner_rotation(n)?)?;
            let diam = sublimb_diameter(id, scan, cfg)?;
            let root_lambda = big_lambda(pq, diam.root)?;
            let n2 = (n * n) as f64;
            Ok(LimbScanRecord {
                n,
                root_lambda,
                re_lower_bound: res.re * 4.0 * PI * PI / (q * q * n2),
                scaled_root: root_lambda.value().re * n2 * q * q / (4.0 * PI * PI),
                hyp_diam: diam.hyp,
                euclid_diam: diam.euclid,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryRecord {
    pub n: i64,
    pub lambda: HalfPlanePoint,
    pub m: HalfPlanePoint,
    pub dist: f64,
}

/// Distance between the rescaled roots of corresponding `(n^2 - 1)/n^3`
/// sublimbs of the satellites `p/q` and `P/Q`.
pub fn corollary_check(
    pq: IrreducibleRational,
    big_pq: IrreducibleRational,
    ns: &[i64],
    cfg: &Tolerances,
) -> Result<Vec<CorollaryRecord>> {
    ns.par_iter()
        .map(|&n| {
            let inner = inner_rotation(n)?;
            let a = sublimb_root(SublimbId::new(pq, inner)?, cfg)?;
            let b = sublimb_root(SublimbId::new(big_pq, inner)?, cfg)?;
            let lambda = big_lambda(pq, a.lambda)?;
            let m = big_lambda(big_pq, b.lambda)?;
            Ok(CorollaryRecord { n, lambda, m, dist: dist_hr(lambda.value(), m.value())? })
        })
        .collect()
}

/// Terms of the identity `H(Lambda) = 1/Lambda + q/P(Lambda)` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResitFunctionCheck {
    pub big_lambda: Complex64,
    pub h: Complex64,
    /// `Log` of the multiplier from cycle continuation.
    pub log_multiplier: Complex64,
    /// `|H - 1/Lambda - q/P|`.
    pub gap: f64,
    /// `-q Lambda / (1 - Lambda H)`, which should reproduce `log_multiplier`.
    pub log_multiplier_from_h: Complex64,
}

pub fn resit_function_check(pq: IrreducibleRational, big: Complex64, cfg: &Tolerances) -> Result<ResitFunctionCheck> {
    if big.norm() == 0.0 {
        return Err(Error::InvalidInput("Lambda must be nonzero".into()));
    }
    let q = pq.q() as f64;
    let h = buff_h(pq, big, None, cfg)?.value;
    let rho = multiplier_map(pq, lambda_from_big(pq, big), cfg)?.rho;
    let log_rho = rho.ln();
    Ok(ResitFunctionCheck {
        big_lambda: big,
        h,
        log_multiplier: log_rho,
        gap: (h - 1.0 / big - q / log_rho).norm(),
        log_multiplier_from_h: -q * big / (1.0 - big * h),
    })
}

/// Kendall rank correlation of a sequence with its index.
pub fn kendall_tau(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mut score = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            score += match values[j].partial_cmp(&values[i]) {
                Some(std::cmp::Ordering::Greater) => 1,
                Some(std::cmp::Ordering::Less) => -1,
                _ => 0,
            };
        }
    }
    score as f64 / (n * (n - 1) / 2) as f64
}

/// `t` at which the unit-circle multiplier equals the root multiplier of the
/// `(n^2 - 1)/n^3` sublimb.
pub fn sublimb_angle(n: i64) -> f64 {
    TAU * (n * n - 1) as f64 / (n * n * n) as f64
}
