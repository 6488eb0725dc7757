//! Finite sum sets `FS(A)` and the statistics derived from them.

mod coverage;
mod greedy;
mod report;
mod residue;

pub use coverage::{
    fs_coverage, fs_coverage_capped, required_bytes, SumCoverage, DEFAULT_MAX_BITS,
};
pub use greedy::{greedy_representation, GreedyRepresentation};
pub use report::{
    ap_detect, coverage_report, syndeticity_constant, ApHit, CoverageReport, CoverageVerdict,
};
pub use residue::{residue_fs, ResidueCoverage};
