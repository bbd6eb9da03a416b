//! Dynamics of the logistic family `P_lambda(z) = lambda z + z^2`: orbits,
//! periodic cycles, contour invariants of fixed points and Misiurewicz
//! parameters.

mod contour;
mod invariants;
mod misiurewicz;
mod orbit;

pub use contour::{contour_integral, contour_integrals, Quadrature};
pub use invariants::{
    buff_h, buff_radius, fixed_point_invariants, fixed_point_invariants_auto, resit_iterate_check,
    select_radius, BuffValue, FixedPointInvariants,
};
pub use misiurewicz::{find_misiurewicz, misiurewicz_seeds, MisiurewiczPoint};
pub use orbit::{find_periodic_orbit, iterate, power_and_derivative, step, CycleRecord, OrbitTrace};

pub(crate) use orbit::{
    check_exact_period, cycle_through, power_with_parameter_derivative, separation,
};
