use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::angle::{ulps_to_f64, Angle, AngleOrigin, ORBIT_BUDGET_BITS};
use crate::error::{Error, Result};
use crate::sets::{enumerate, SetSpec, SortedSet};

const HISTOGRAM_BINS: usize = 10;

/// Sorted orbit points `nα mod 1` and their circular gap structure.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitStats {
    pub alpha: AngleOrigin,
    pub precision: u32,
    pub count: usize,
    pub points: Vec<f64>,
    /// Largest arc between circularly consecutive points; `1` for a single point.
    pub max_gap: f64,
    /// Upper bound on the error of `max_gap`.
    pub max_gap_err: f64,
    /// Gap counts in equal bins over `[0, max_gap]`.
    pub gap_histogram: Vec<u64>,
    #[serde(skip)]
    exact: Vec<(BigUint, u64)>,
    #[serde(skip)]
    alpha_err_ulps: BigUint,
}

impl OrbitStats {
    pub fn eps_dense(&self, eps: f64) -> bool {
        self.max_gap <= eps
    }

    /// `(value in ulps, source element)` for each point, in circle order.
    pub fn exact_points(&self) -> &[(BigUint, u64)] {
        &self.exact
    }

    /// Declared error of the point coming from element `n`, in ulps.
    pub fn point_err_ulps(&self, n: u64) -> BigUint {
        &self.alpha_err_ulps * n + 1u32
    }
}

/// Orbit of `A` under rotation by `α`.
///
/// Refuses when `max(A) · err(α) > 2^-32`, reporting the precision needed.
pub fn orbit(a: &SortedSet, alpha: &Angle) -> Result<OrbitStats> {
    let max = a
        .max()
        .ok_or_else(|| Error::invalid("orbit of an empty set"))?;
    alpha.check_budget(&BigUint::from(max), ORBIT_BUDGET_BITS)?;
    let p = alpha.precision();
    let fixed = alpha.fixed();
    let mut exact: Vec<(BigUint, u64)> = a
        .elements()
        .par_iter()
        .map(|&n| (fixed.mul_int(&BigUint::from(n)).value().clone(), n))
        .collect();
    exact.par_sort_unstable();

    let modulus = BigUint::one() << p;
    let mut gaps: Vec<BigUint> = exact.windows(2).map(|w| &w[1].0 - &w[0].0).collect();
    gaps.push(&modulus - &exact[exact.len() - 1].0 + &exact[0].0);
    let max_gap_ulps = gaps.iter().max().unwrap().clone();
    let max_gap = ulps_to_f64(&max_gap_ulps, p);

    let mut gap_histogram = vec![0u64; HISTOGRAM_BINS];
    for g in &gaps {
        let x = ulps_to_f64(g, p);
        let bin = if max_gap > 0.0 {
            ((x / max_gap) * HISTOGRAM_BINS as f64) as usize
        } else {
            0
        };
        gap_histogram[bin.min(HISTOGRAM_BINS - 1)] += 1;
    }

    let alpha_err_ulps = fixed.err_ulps().clone();
    let worst_point = &alpha_err_ulps * max + 1u32;
    Ok(OrbitStats {
        alpha: alpha.origin().clone(),
        precision: p,
        count: exact.len(),
        points: exact.iter().map(|(v, _)| ulps_to_f64(v, p)).collect(),
        max_gap,
        max_gap_err: 2.0 * ulps_to_f64(&worst_point, p),
        gap_histogram,
        exact,
        alpha_err_ulps,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsProbeRow {
    pub alpha: AngleOrigin,
    pub count: usize,
    pub max_gap: f64,
    pub eps_dense: bool,
}

/// Orbit gap of one set prefix for several angles.
pub fn eps_probe(spec: &SetSpec, alphas: &[Angle], bound: u64, eps: f64) -> Result<Vec<EpsProbeRow>> {
    if let Some(r) = alphas.iter().find(|a| !a.origin().is_irrational()) {
        return Err(Error::invalid(format!(
            "{} is rational; dispersion is only defined for irrational angles",
            r.origin()
        )));
    }
    let set = enumerate(spec, bound)?;
    alphas
        .par_iter()
        .map(|alpha| {
            let s = orbit(&set, alpha)?;
            Ok(EpsProbeRow {
                alpha: s.alpha.clone(),
                count: s.count,
                max_gap: s.max_gap,
                eps_dense: s.eps_dense(eps),
            })
        })
        .collect()
}
