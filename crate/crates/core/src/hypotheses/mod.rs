//! Finite-prefix checks of the growth, divergence and residue hypotheses,
//! the family-specific hypothesis bundles, and certificate assembly.

mod bundles;
mod certify;
mod divergence;
mod growth;
mod residue;
mod zannier;

pub use bundles::{
    begl_check, poly_power_bundle, power_times_finite_bundle, BeglReport, PolyPowerBundle,
    PowerTimesFiniteBundle, ReciprocalSum,
};
pub use certify::{
    certify, Certificate, CertifyOptions, DivergenceCheck, PartCheck, Partition, PartitionStrategy,
    Verdict, Verdicts, DEFAULT_QMAX,
};
pub use divergence::{divergence_probe, DivergenceProbe, SumTrend};
pub use growth::{
    condition1_sup, delta_density, nondivisible_counts, partition3, sublacunarity, window_count,
    Condition1, DeltaDensity, Part, RatioStats, Trend, WindowCount,
};
pub use residue::{residue_conditions, DescentStep, ResidueRecord, StepMethod};
pub use zannier::{
    geometric_floors, zannier_check, zannier_prime_witness, zannier_witness, LinearWitness,
    PrimeWitness, ZannierOutcome, ZannierReport, COMBINATION_CAP, DEFAULT_FLOORS, DEFAULT_ZMAX,
    MAX_ZMAX, WINDOW,
};
