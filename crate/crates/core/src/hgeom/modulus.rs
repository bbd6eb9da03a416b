use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative residual at which conjugate gradients stops.
const CG_TOL: f64 = 1e-10;

/// Modulus of the parallelogram `Q(va, vb)`: the extremal length of the
/// family of curves joining its two sides parallel to `va`.
///
/// Computed as `1/E`, where `E` is the Dirichlet energy of the harmonic
/// function equal to 0 and 1 on those sides with free boundary on the other
/// two. `E` is approximated with linear finite elements on `grid x grid` and
/// `2 grid x 2 grid` cells, followed by one Richardson step.
pub fn parallelogram_modulus(va: Complex64, vb: Complex64, grid: usize) -> Result<f64> {
    let cross = (va.conj() * vb).im;
    if !(cross.abs() > 1e-12 * va.norm() * vb.norm()) {
        return Err(Error::DegenerateParallelogram);
    }
    if grid < 2 {
        return Err(Error::InvalidInput("grid must be at least 2".into()));
    }
    let coarse = dirichlet_energy(va, vb, grid);
    let fine = dirichlet_energy(va, vb, 2 * grid);
    Ok(3.0 / (4.0 * fine - coarse))
}

/// Local stiffness matrix of a triangle, in the order of its vertices.
fn triangle_stiffness(p: [Complex64; 3]) -> [[f64; 3]; 3] {
    let edges = [p[2] - p[1], p[0] - p[2], p[1] - p[0]];
    let area = 0.5 * (edges[2].conj() * (-edges[1])).im.abs();
    let mut k = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            k[a][b] = (edges[a].re * edges[b].re + edges[a].im * edges[b].im) / (4.0 * area);
        }
    }
    k
}

/// Every cell of the grid is the same parallelogram, split along its shorter
/// diagonal into two triangles. Each triangle is stored as corner offsets
/// `(di, dj)` together with its stiffness matrix.
type Triangle = ([(usize, usize); 3], [[f64; 3]; 3]);

struct Stencil {
    triangles: [Triangle; 2],
}

impl Stencil {
    fn new(va: Complex64, vb: Complex64, n: usize) -> Self {
        let (ha, hb) = (va / n as f64, vb / n as f64);
        let at = |(i, j): (usize, usize)| ha * i as f64 + hb * j as f64;
        let tris: [[(usize, usize); 3]; 2] = if (ha + hb).norm() <= (ha - hb).norm() {
            [[(0, 0), (1, 0), (1, 1)], [(0, 0), (1, 1), (0, 1)]]
        } else {
            [[(0, 0), (1, 0), (0, 1)], [(1, 0), (1, 1), (0, 1)]]
        };
        let build = |t: [(usize, usize); 3]| (t, triangle_stiffness([at(t[0]), at(t[1]), at(t[2])]));
        Self { triangles: [build(tris[0]), build(tris[1])] }
    }

    /// `y = K x` on the full `(n+1) x (n+1)` node grid.
    fn apply(&self, n: usize, x: &[f64], y: &mut [f64]) {
        let w = n + 1;
        y.iter_mut().for_each(|v| *v = 0.0);
        for j in 0..n {
            for i in 0..n {
                for (tri, k) in &self.triangles {
                    let idx = tri.map(|(di, dj)| (j + dj) * w + i + di);
                    let xs = idx.map(|p| x[p]);
                    for a in 0..3 {
                        y[idx[a]] += k[a][0] * xs[0] + k[a][1] * xs[1] + k[a][2] * xs[2];
                    }
                }
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Discrete Dirichlet energy with `u = 0` on `j = 0` and `u = 1` on `j = n`.
fn dirichlet_energy(va: Complex64, vb: Complex64, n: usize) -> f64 {
    let w = n + 1;
    let stencil = Stencil::new(va, vb, n);
    let free = |p: usize| {
        let j = p / w;
        j != 0 && j != n
    };
    // The linear profile is exact for rectangles and a good start otherwise.
    let mut u: Vec<f64> = (0..w * w).map(|p| (p / w) as f64 / n as f64).collect();
    let mut ku = vec![0.0; w * w];
    stencil.apply(n, &u, &mut ku);
    let mut r: Vec<f64> = (0..w * w).map(|p| if free(p) { -ku[p] } else { 0.0 }).collect();
    let scale = {
        let mut unit = vec![0.0; w * w];
        let mut k_unit = vec![0.0; w * w];
        unit[w * n..].fill(1.0);
        stencil.apply(n, &unit, &mut k_unit);
        (0..w * w).filter(|&p| free(p)).map(|p| k_unit[p] * k_unit[p]).sum::<f64>().sqrt()
    };
    let mut p = r.clone();
    let mut kp = vec![0.0; w * w];
    let mut rr = dot(&r, &r);
    let max_iter = 20 * w * w;
    for _ in 0..max_iter {
        if rr.sqrt() <= CG_TOL * scale {
            break;
        }
        stencil.apply(n, &p, &mut kp);
        for (q, v) in kp.iter_mut().enumerate() {
            if !free(q) {
                *v = 0.0;
            }
        }
        let alpha = rr / dot(&p, &kp);
        for q in 0..w * w {
            u[q] += alpha * p[q];
            r[q] -= alpha * kp[q];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for q in 0..w * w {
            p[q] = r[q] + beta * p[q];
        }
    }
    stencil.apply(n, &u, &mut ku);
    dot(&u, &ku)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rectangles_are_exact() {
        assert!((parallelogram_modulus(c(1.0, 0.0), c(0.0, 2.0), 16).unwrap() - 2.0).abs() < 1e-9);
        assert!((parallelogram_modulus(c(1.0, 0.0), c(0.0, 1.0), 16).unwrap() - 1.0).abs() < 1e-9);
        assert!((parallelogram_modulus(c(3.0, 0.0), c(0.0, 0.5), 16).unwrap() - 1.0 / 6.0).abs() < 1e-9);
    }

    #[test]
    fn swapping_sides_inverts() {
        let (va, vb) = (c(1.0, 0.0), c(0.5, 1.0));
        let m1 = parallelogram_modulus(va, vb, 32).unwrap();
        let m2 = parallelogram_modulus(vb, va, 32).unwrap();
        assert!((m1 * m2 - 1.0).abs() < 1e-3, "{m1} {m2}");
    }

    #[test]
    fn similarity_invariance() {
        let (va, vb) = (c(1.0, 0.2), c(0.3, 1.4));
        let s = c(-0.7, 2.3);
        let m1 = parallelogram_modulus(va, vb, 16).unwrap();
        let m2 = parallelogram_modulus(s * va, s * vb, 16).unwrap();
        assert!((m1 - m2).abs() < 1e-9 * m1);
    }

    #[test]
    fn sheared_parallelogram_is_grid_stable() {
        let a = parallelogram_modulus(c(1.0, 0.0), c(0.5, 1.0), 16).unwrap();
        let b = parallelogram_modulus(c(1.0, 0.0), c(0.5, 1.0), 32).unwrap();
        assert!((a - b).abs() < 0.01 * b);
        // Shearing lengthens the curves between the long sides.
        assert!(b > 1.0);
    }

    #[test]
    fn degenerate_is_rejected() {
        assert_eq!(parallelogram_modulus(c(1.0, 1.0), c(2.0, 2.0), 8), Err(Error::DegenerateParallelogram));
    }
}
