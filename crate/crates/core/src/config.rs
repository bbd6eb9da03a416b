use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by all kernels.
///
/// Passed by reference into every operation so that parallel workers never
/// share mutable state. Missing fields deserialize to their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Residual accepted for `P^n(z) = z` and for Misiurewicz equations.
    pub orbit: f64,
    /// Newton stops once `|step| < newton_step * (1 + |z|)`.
    pub newton_step: f64,
    /// Newton also stops once the residual drops below this.
    pub newton_residual: f64,
    pub max_newton_steps: usize,
    /// `|P^d(z) - z|` below this for a proper divisor `d` means wrong period.
    pub divisor_period: f64,
    /// Trapezoid refinement stops when successive estimates differ by less
    /// than `quadrature * (1 + |I|)`.
    pub quadrature: f64,
    pub quadrature_min_nodes: usize,
    pub quadrature_max_nodes: usize,
    /// Minimum of `|F(w) - w|` on an admissible contour.
    pub contour_clearance: f64,
    /// Largest radius tried by the automatic radius search; it is halved
    /// until `radius_floor`.
    pub radius_start: f64,
    pub radius_floor: f64,
    /// Allowed distance of a multiplicity integral from the nearest integer.
    pub rounding: f64,
    /// Smallest continuation step, relative to the path length.
    pub continuation_min_step: f64,
    /// Residual accepted by the `(lambda, z)` Newton solver for multipliers.
    pub inversion_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orbit: 1e-10,
            newton_step: 1e-13,
            newton_residual: 1e-13,
            max_newton_steps: 200,
            divisor_period: 1e-8,
            quadrature: 1e-10,
            quadrature_min_nodes: 64,
            quadrature_max_nodes: 1 << 20,
            contour_clearance: 1e-6,
            radius_start: 0.4,
            radius_floor: 1e-3,
            rounding: 0.01,
            continuation_min_step: 1e-8,
            inversion_residual: 1e-12,
        }
    }
}

/// Escape radius for `P_lambda`: once `|z|` exceeds it the orbit diverges.
pub fn escape_radius(lambda: num_complex::Complex64) -> f64 {
    2.0 * (1.0 + lambda.norm())
}
