//! Fixed inputs shared by the benchmarks.

use satlab_core::render::{Plane, Viewport};
use satlab_core::{Complex64, IrreducibleRational};

/// Satellites with small denominators, in increasing order of `q`.
pub fn satellites() -> Vec<IrreducibleRational> {
    [(0, 1), (1, 2), (1, 3), (2, 5), (3, 7)]
        .into_iter()
        .map(|(p, q)| IrreducibleRational::new(p, q).expect("fixture rationals are reduced"))
        .collect()
}

/// A parameter inside the 1/2 satellite, away from its root.
pub fn inside_half_satellite() -> Complex64 {
    Complex64::new(-1.4, 0.1)
}

/// Pairs of tori used for the distance and quadruple kernels.
pub fn torus_pairs() -> Vec<(Complex64, Complex64)> {
    vec![
        (Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)),
        (Complex64::new(0.3, 0.7), Complex64::new(1.1, -0.2)),
    ]
}

/// The whole `lambda` plane locus at `px` pixels per side.
pub fn locus_view(px: usize) -> Viewport {
    Viewport::square(Complex64::new(1.0, 0.0), 3.2, px, Plane::LambdaSmall).expect("fixture viewport is valid")
}
