//! Cross-checks of the numerical kernels against independent computations.

use std::f64::consts::{PI, TAU};

use satlab_core::asymp::{corollary_check, divergence_scan, residue_contour, sublimb_angle};
use satlab_core::hgeom::{bezout_pair, convergents, dist_hr, mobius_a};
use satlab_core::params::multiplier_map;
use satlab_core::{Complex64, IrreducibleRational, Tolerances};

fn pq(p: i64, q: i64) -> IrreducibleRational {
    IrreducibleRational::new(p, q).unwrap()
}

/// Taylor coefficients of `P_lambda^q` at 0, truncated after degree `n - 1`.
fn iterate_series(lambda: Complex64, q: usize, n: usize) -> Vec<Complex64> {
    let mut s = vec![Complex64::new(0.0, 0.0); n];
    s[1] = Complex64::new(1.0, 0.0);
    for _ in 0..q {
        let mut next: Vec<Complex64> = s.iter().map(|c| lambda * c).collect();
        for i in 0..n {
            for j in 0..n - i {
                next[i + j] += s[i] * s[j];
            }
        }
        s = next;
    }
    s
}

/// Residue iteratif of a parabolic fixed point of multiplicity `q + 1` at 0,
/// from the Laurent expansion of `1 / (z - F(z))`.
fn resit_by_series(p: i64, q: usize) -> Complex64 {
    let lambda = Complex64::from_polar(1.0, TAU * p as f64 / q as f64);
    let f = iterate_series(lambda, q, 2 * q + 2);
    // z - F(z) = -z^{q+1} (c_0 + c_1 z + ...).
    let c: Vec<Complex64> = f[q + 1..].to_vec();
    // Reciprocal series of c up to degree q.
    let mut inv = vec![Complex64::new(0.0, 0.0); q + 1];
    inv[0] = 1.0 / c[0];
    for k in 1..=q {
        let acc: Complex64 = (1..=k).map(|j| c[j] * inv[k - j]).sum();
        inv[k] = -acc / c[0];
    }
    let index = -inv[q];
    (q as f64 + 1.0) / 2.0 - index
}

#[test]
fn residue_matches_power_series() {
    let cfg = Tolerances::default();
    for (p, q) in [(0, 1), (1, 2), (1, 3), (1, 4), (2, 5), (1, 6), (3, 7)] {
        let contour = residue_contour(pq(p, q), &cfg).unwrap();
        let series = resit_by_series(p, q as usize);
        assert!((contour - series).norm() < 1e-8 * series.norm(), "{p}/{q}: {contour} vs {series}");
    }
}

#[test]
fn series_oracle_reproduces_eleven_eighths() {
    assert!((resit_by_series(1, 2) - Complex64::new(11.0 / 8.0, 0.0)).norm() < 1e-14);
    assert!((resit_by_series(0, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
}

/// Length of the geodesic arc between two points of `|z - i c| = r`,
/// integrated with Simpson's rule.
fn geodesic_length(z: Complex64, w: Complex64) -> f64 {
    let c = (z.norm_sqr() - w.norm_sqr()) / (2.0 * (z.im - w.im));
    let centre = Complex64::new(0.0, c);
    let (r, a, b) = ((z - centre).norm(), (z - centre).arg(), (w - centre).arg());
    let n = 20_000;
    let h = (b - a) / n as f64;
    let integrand = |t: f64| r / (r * t.cos());
    let mut sum = integrand(a) + integrand(b);
    for k in 1..n {
        sum += if k % 2 == 1 { 4.0 } else { 2.0 } * integrand(a + k as f64 * h);
    }
    (sum * h / 3.0).abs()
}

#[test]
fn distance_agrees_with_arc_length() {
    for (z, w) in [
        (Complex64::new(1.0, 0.0), Complex64::new(1.0, 4.0)),
        (Complex64::new(0.3, -1.0), Complex64::new(2.0, 2.5)),
    ] {
        assert!((dist_hr(z, w).unwrap() - geodesic_length(z, w)).abs() < 1e-9);
    }
    assert!((dist_hr(Complex64::new(1.0, 0.0), Complex64::new(1.0, 4.0)).unwrap() - 9f64.acosh()).abs() < 1e-12);
}

#[test]
fn convergents_of_pi_minus_three() {
    let c = convergents(PI - 3.0, 4);
    assert_eq!(c, vec![(0, 1), (1, 7), (15, 106), (16, 113)]);
}

#[test]
fn bezout_examples() {
    for (u, v, m, n) in [(1, 2, 0, 1), (2, 3, 1, 2), (3, 5, 1, 2)] {
        let (bm, bn) = bezout_pair(u, v).unwrap();
        assert_eq!(bn * u - v * bm, 1);
        assert_eq!((bm, bn), (m, n));
    }
}

#[test]
fn mobius_sends_endpoint_to_infinity() {
    let endpoint = Complex64::new(0.0, TAU * 0.5);
    let mut last = 0.0;
    for k in 1..6 {
        let z = endpoint + Complex64::new(10f64.powi(-k), 0.0);
        let w = mobius_a(0, 1, 1, 2, z).unwrap().norm();
        assert!(w > last);
        last = w;
    }
    assert!(last > 1e4);
}

#[test]
fn multiplier_matches_closed_form_for_period_two() {
    // The 2-cycle of P_lambda has multiplier 4 + 2 lambda - lambda^2.
    let cfg = Tolerances::default();
    for lambda in [Complex64::new(-1.5, 0.2), Complex64::new(-1.1, -0.4)] {
        let rho = multiplier_map(pq(1, 2), lambda, &cfg).unwrap().rho;
        assert!((rho - (4.0 + 2.0 * lambda - lambda * lambda)).norm() < 1e-10);
    }
}

#[test]
fn corollary_root_is_the_divergence_point() {
    // The root of the 63/512 sublimb is where the multiplier is e^{it} with
    // t = 2 pi 63/512, so both computations meet within the limb diameters.
    let cfg = Tolerances::default();
    let root = corollary_check(pq(1, 2), pq(1, 3), &[8], &cfg).unwrap()[0];
    let scan = divergence_scan(pq(1, 2), pq(1, 3), &[sublimb_angle(8)], &cfg).unwrap()[0];
    assert!((root.dist - scan.dist).abs() < 1e-6, "{} vs {}", root.dist, scan.dist);
}
