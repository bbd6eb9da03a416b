//! Hyperbolic geometry of the right half-plane and the tori
//! `C / (2 pi i Z + Lambda Z)`: distances, affine stretches, the normalising
//! Mobius maps, parallelogram moduli and the search for lattice quadruples
//! that realise the distance as a ratio of moduli.

mod cf;
mod metric;
mod modulus;
mod quadruple;

pub use cf::{bezout_pair, convergents, simplest_rational_between};
pub use metric::{affine_between_tori, dist_hr, mobius_a, AffineStretch, MobiusA};
pub use modulus::parallelogram_modulus;
pub use quadruple::{
    claim_case, quadruple_search, ClaimCase, LatticeQuadruple, QuadrupleWitness, SearchConfig,
};
