//! Finite sum sets of integer-set families, machine checks of completeness
//! hypotheses, and fixed-point probes of orbit dispersion on the circle.

pub mod density;
pub mod diophantine;
pub mod error;
pub mod fs;
pub mod hypotheses;
pub mod sets;

mod serde_dec;

pub use error::{Error, Result};
