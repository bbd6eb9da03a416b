use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::rational::IrreducibleRational;

/// A parameter whose critical value lands on the fixed point `0` after
/// exactly `m` blocks of `q` iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MisiurewiczPoint {
    pub lambda: Complex64,
    pub blocks: usize,
    pub residual: f64,
}

/// Critical value `P_lambda(-lambda/2) = -lambda^2/4` pushed forward `n`
/// steps, with its `lambda`-derivative.
fn critical_orbit(lambda: Complex64, n: usize) -> (Complex64, Complex64) {
    let mut z = -lambda * lambda / 4.0;
    let mut dz = -lambda / 2.0;
    for _ in 0..n {
        dz = z + (lambda + 2.0 * z) * dz;
        z = lambda * z + z * z;
    }
    (z, dz)
}

/// Solves `P_lambda^{qm}(-lambda^2/4) = 0` by Newton in `lambda` from `seed`.
pub fn find_misiurewicz(
    pq: IrreducibleRational,
    m: usize,
    seed: Complex64,
    cfg: &Tolerances,
) -> Result<MisiurewiczPoint> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let n = pq.period() * m;
    let mut lambda = seed;
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_newton_steps {
        let (g, dg) = critical_orbit(lambda, n);
        residual = g.norm();
        if !residual.is_finite() || dg.norm() == 0.0 {
            break;
        }
        let delta = g / dg;
        lambda -= delta;
        if delta.norm() < cfg.newton_step * (1.0 + lambda.norm()) {
            residual = critical_orbit(lambda, n).0.norm();
            break;
        }
    }
    if !(residual < cfg.orbit) {
        return Err(Error::NoConvergence { steps: cfg.max_newton_steps, residual });
    }
    for earlier in 0..m {
        let (z, _) = critical_orbit(lambda, pq.period() * earlier);
        if z.norm() < cfg.divisor_period {
            return Err(Error::NotMinimal { m: earlier });
        }
    }
    Ok(MisiurewiczPoint { lambda, blocks: m, residual })
}

/// Grid points of the square `center +- half_width` where
/// `|P_lambda^{qm}(-lambda^2/4)|` is a strict local minimum, best first.
pub fn misiurewicz_seeds(
    pq: IrreducibleRational,
    m: usize,
    center: Complex64,
    half_width: f64,
    grid: usize,
) -> Vec<Complex64> {
    let n = pq.period() * m;
    let at = |i: usize, j: usize| {
        let x = -1.0 + 2.0 * i as f64 / (grid - 1) as f64;
        let y = -1.0 + 2.0 * j as f64 / (grid - 1) as f64;
        center + half_width * Complex64::new(x, y)
    };
    let values: Vec<f64> = (0..grid * grid)
        .map(|k| critical_orbit(at(k % grid, k / grid), n).0.norm())
        .collect();
    let mut minima = Vec::new();
    for j in 1..grid - 1 {
        for i in 1..grid - 1 {
            let v = values[j * grid + i];
            let lower = (-1i64..=1)
                .flat_map(|dj| (-1i64..=1).map(move |di| (di, dj)))
                .filter(|&d| d != (0, 0))
                .all(|(di, dj)| v < values[(j as i64 + dj) as usize * grid + (i as i64 + di) as usize]);
            if lower && v.is_finite() {
                minima.push((v, at(i, j)));
            }
        }
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    minima.into_iter().map(|(_, l)| l).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tip_of_the_main_antenna() {
        let r = IrreducibleRational::new(0, 1).unwrap();
        let mp = find_misiurewicz(r, 1, c(4.2, 0.1), &Tolerances::default()).unwrap();
        assert!((mp.lambda - c(4.0, 0.0)).norm() < 1e-12);
        assert!((mp.lambda / 2.0 - mp.lambda * mp.lambda / 4.0 - c(-2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn mirror_tip_lands_on_the_other_fixed_point() {
        // lambda = -2 gives the same c = -2, but its critical value is
        // mapped to 1 - lambda = 3 rather than to 0.
        let lambda = c(-2.0, 0.0);
        let (g, _) = critical_orbit(lambda, 1);
        assert_eq!(g, 1.0 - lambda);
        let r = IrreducibleRational::new(0, 1).unwrap();
        match find_misiurewicz(r, 1, c(-2.1, 0.0), &Tolerances::default()) {
            Ok(mp) => assert!((mp.lambda - lambda).norm() > 0.5),
            Err(e) => assert!(matches!(e, Error::NotMinimal { m: 0 } | Error::NoConvergence { .. })),
        }
    }

    #[test]
    fn one_half_wake_point_from_grid_seed() {
        let r = IrreducibleRational::new(1, 2).unwrap();
        let seeds = misiurewicz_seeds(r, 1, c(-1.6, 0.0), 0.4, 41);
        let cfg = Tolerances::default();
        let mp = seeds
            .iter()
            .find_map(|&s| find_misiurewicz(r, 1, s, &cfg).ok())
            .unwrap();
        assert!(mp.residual < 1e-10);
        // Real root of lambda^3 - 4 lambda^2 + 16.
        let l = mp.lambda;
        assert!((l * l * l - 4.0 * l * l + 16.0).norm() < 1e-9);
        assert!(l.re < -1.0 && l.im.abs() < 1e-12);
    }
}
