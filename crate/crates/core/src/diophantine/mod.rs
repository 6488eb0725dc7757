//! Circle rotations with tracked error: orbits, continued fractions and the
//! explicit constructions built from them.

mod angle;
mod cf;
mod orbit;
mod search;
mod thick;
mod vandermonde;

pub use angle::{
    Angle, AngleOrigin, Fixed, DEFAULT_PRECISION, MAX_PRECISION, MIN_PRECISION, ORBIT_BUDGET_BITS,
};
pub(crate) use angle::ulps_to_f64;
pub use cf::{convergents, Convergents};
pub use orbit::{eps_probe, orbit, EpsProbeRow, OrbitStats};
pub use search::{
    example_ncd_build, find_ncd_k0, min_norm_in_range, observation_sequence, NcdConstruction,
    NormHit,
};
pub use thick::{adversarial_thick, diagonal_pairing, ThickLog, ThickStep, DEFAULT_SEARCH_CAP};
pub use vandermonde::{bareiss_det, vandermonde_witness, VandermondeWitness};
