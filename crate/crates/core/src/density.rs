//! Element counts against closed-form growth bounds, and exact FS densities.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fs::{fs_coverage_capped, DEFAULT_MAX_BITS};
use crate::sets::{enumerate, IntPoly, SetSpec, DEFAULT_PROBE_BOUND};

/// Which closed-form bound applies to a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundRoute {
    /// `{a^{n²} b^{m²}}`: `√(log_a N)·√(log_b N)` elements, FS exponent `√(log_a 2 · log_b 2)`.
    SquareExponents,
    /// `{∏ a_i^{P_i(n_i)}}`: `∏ (C log_{a_i} N + C² + 1)^{1/deg P_i}` elements, exponent `Σ 1/deg P_i`.
    PolyExponents,
    /// `{aⁿ}`: `⌊log_a N⌋ + 1` elements, FS exponent `log_a 2`.
    Powers,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct DensityReport {
    pub N: u64,
    pub element_count: u64,
    pub element_bound: Option<f64>,
    pub fs_count: u64,
    pub fs_fraction: f64,
    pub exponent: Option<f64>,
}

/// Minimal integer `C ≥ 1` with `P(x) ≥ x^d / C − C` on `ℕ₀`, i.e.
/// `C·P(x) − x^d + C² ≥ 0`, certified past the root bound.
pub fn growth_constant(p: &IntPoly) -> Result<u64> {
    let d = p.degree();
    for c in 1u64..=1 << 20 {
        let ci = c as i64;
        let mut coeffs: Vec<i64> = Vec::with_capacity(d + 1);
        for (i, &a) in p.coeffs().iter().enumerate() {
            let mut v = a.checked_mul(ci).ok_or_else(|| Error::invalid("coefficients too large"))?;
            if i == 0 {
                v = v.checked_add(ci * ci).ok_or_else(|| Error::invalid("coefficients too large"))?;
            }
            if i == d {
                v -= 1;
            }
            coeffs.push(v);
        }
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let ok = if coeffs.len() == 1 {
            coeffs[0] >= 0
        } else if *coeffs.last().unwrap() < 0 {
            false
        } else {
            let q = IntPoly::new(coeffs)?;
            matches!(q.check_nonnegative(DEFAULT_PROBE_BOUND), Ok(r) if r.global)
        };
        if ok {
            return Ok(c);
        }
    }
    Err(Error::invalid(format!("no growth constant found for {p}")))
}

fn route(spec: &SetSpec) -> BoundRoute {
    match spec {
        SetSpec::PolyPowerProduct { bases, polys }
            if bases.len() == 2 && polys.iter().all(|p| *p == IntPoly::monomial(2)) =>
        {
            BoundRoute::SquareExponents
        }
        SetSpec::PolyPowerProduct { .. } => BoundRoute::PolyExponents,
        SetSpec::GammaSingle { .. } => BoundRoute::Powers,
        _ => BoundRoute::None,
    }
}

fn log_base(a: u64, x: f64) -> f64 {
    x.ln() / (a as f64).ln()
}

fn closed_form(spec: &SetSpec, n: u64) -> Result<(Option<f64>, Option<f64>)> {
    let nf = n as f64;
    Ok(match (route(spec), spec) {
        (BoundRoute::SquareExponents, SetSpec::PolyPowerProduct { bases, .. }) => {
            let (a, b) = (bases[0], bases[1]);
            (
                Some(log_base(a, nf).sqrt() * log_base(b, nf).sqrt()),
                Some((log_base(a, 2.0) * log_base(b, 2.0)).sqrt()),
            )
        }
        (BoundRoute::PolyExponents, SetSpec::PolyPowerProduct { bases, polys }) => {
            let mut bound = 1.0;
            let mut exponent = 0.0;
            for (&a, p) in bases.iter().zip(polys) {
                let c = growth_constant(p)? as f64;
                let d = p.degree() as f64;
                bound *= (c * log_base(a, nf) + c * c + 1.0).powf(1.0 / d);
                exponent += 1.0 / d;
            }
            (Some(bound), Some(exponent))
        }
        (BoundRoute::Powers, SetSpec::GammaSingle { a }) => {
            (Some((n.ilog(*a) + 1) as f64), Some(log_base(*a, 2.0)))
        }
        _ => (None, None),
    })
}

/// Exact element and FS counts at each `N`, next to the closed-form bounds.
pub fn density_scan(spec: &SetSpec, ns: &[u64], max_bits: u64) -> Result<Vec<DensityReport>> {
    spec.validate()?;
    ns.par_iter()
        .map(|&n| {
            let set = enumerate(spec, n)?;
            let cov = fs_coverage_capped(&set, n, max_bits)?;
            let (element_bound, exponent) = closed_form(spec, n)?;
            let fs_count = cov.count();
            Ok(DensityReport {
                N: n,
                element_count: set.len() as u64,
                element_bound,
                fs_count,
                fs_fraction: fs_count as f64 / n as f64,
                exponent,
            })
        })
        .collect()
}

pub fn density_scan_default(spec: &SetSpec, ns: &[u64]) -> Result<Vec<DensityReport>> {
    density_scan(spec, ns, DEFAULT_MAX_BITS)
}

#[derive(Clone, Debug, Serialize)]
pub struct NonCompletenessCheck {
    /// Exact `Σ 1/deg P_i`.
    pub degree_sum: String,
    /// `Σ 1/deg P_i < 1`.
    pub hypothesis_holds: bool,
    pub bases_pairwise_coprime: bool,
    pub growth_constants: Vec<u64>,
    pub reports: Vec<DensityReport>,
    /// `fs_fraction` strictly decreases along the scan.
    pub fs_fraction_decreasing: bool,
}

/// Degree-sum hypothesis for `{∏ a_i^{P_i(n_i)}}` plus a density scan.
pub fn degree_sum_check(bases: &[u64], polys: &[IntPoly], ns: &[u64]) -> Result<NonCompletenessCheck> {
    let spec = SetSpec::PolyPowerProduct {
        bases: bases.to_vec(),
        polys: polys.to_vec(),
    };
    spec.validate()?;
    let sum: BigRational = polys
        .iter()
        .map(|p| BigRational::new(BigInt::one(), BigInt::from(p.degree())))
        .fold(BigRational::zero(), |acc, x| acc + x);
    let bases_pairwise_coprime = bases
        .iter()
        .enumerate()
        .all(|(i, a)| bases[i + 1..].iter().all(|b| a.gcd(b) == 1));
    let growth_constants = polys.iter().map(growth_constant).collect::<Result<Vec<_>>>()?;
    let reports = density_scan_default(&spec, ns)?;
    let fs_fraction_decreasing = reports.windows(2).all(|w| w[1].fs_fraction < w[0].fs_fraction);
    Ok(NonCompletenessCheck {
        degree_sum: sum.to_string(),
        hypothesis_holds: sum < BigRational::one(),
        bases_pairwise_coprime,
        growth_constants,
        reports,
        fs_fraction_decreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares() -> SetSpec {
        SetSpec::PolyPowerProduct {
            bases: vec![2, 3],
            polys: vec![IntPoly::monomial(2), IntPoly::monomial(2)],
        }
    }

    #[test]
    fn square_exponents_at_one_million() {
        let r = &density_scan_default(&squares(), &[1_000_000]).unwrap()[0];
        // n ≤ 4, m ≤ 3 with 2^{n²} 3^{m²} ≤ 10⁶, by direct pair enumeration.
        let pairs = (0u32..5)
            .flat_map(|n| (0u32..4).map(move |m| (n, m)))
            .filter(|&(n, m)| 2f64.powi((n * n) as i32) * 3f64.powi((m * m) as i32) <= 1e6)
            .count();
        assert_eq!(r.element_count, 17);
        assert_eq!(pairs, 17);
        assert!(r.fs_count <= 1 << r.element_count);
        let expected = (1.0f64 / 3f64.log2()).sqrt();
        assert!((r.exponent.unwrap() - expected).abs() < 1e-15);
        assert!((r.exponent.unwrap() - 0.79431).abs() < 1e-5);
        // Counts the n = 0 and m = 0 rows, so the bare square-root bound is exceeded at this N.
        assert!(r.element_bound.unwrap() < 17.0);
    }

    #[test]
    fn powers_of_three_obey_the_subset_bound() {
        let r = &density_scan_default(&SetSpec::GammaSingle { a: 3 }, &[1_000_000]).unwrap()[0];
        assert_eq!(r.element_count, 13);
        assert_eq!(r.fs_count, (1 << 13) - 1);
        assert_eq!(r.element_bound, Some(13.0));
    }

    #[test]
    fn powers_of_two_are_complete() {
        for r in density_scan_default(&SetSpec::GammaSingle { a: 2 }, &[10, 1000, 65_536, 1_000_000]).unwrap() {
            assert_eq!(r.fs_fraction, 1.0);
        }
    }

    #[test]
    fn growth_constants() {
        assert_eq!(growth_constant(&IntPoly::monomial(2)).unwrap(), 1);
        // Brute-force check of minimality on a grid.
        let p = IntPoly::new(vec![0, -3, 1]).unwrap();
        let c = growth_constant(&p).unwrap();
        for x in 0..10_000i64 {
            let v = c as i64 * (x * x - 3 * x) - x * x + (c * c) as i64;
            assert!(v >= 0);
        }
        let below = c as i64 - 1;
        assert!((0..10_000i64).any(|x| below * (x * x - 3 * x) - x * x + below * below < 0));
    }

    #[test]
    fn degree_sum_hypothesis() {
        let r = degree_sum_check(&[2, 3], &[IntPoly::monomial(2), IntPoly::monomial(3)], &[1000, 10_000]).unwrap();
        assert_eq!(r.degree_sum, "5/6");
        assert!(r.hypothesis_holds);
        assert!(r.bases_pairwise_coprime);

        let r = degree_sum_check(&[2, 3], &[IntPoly::monomial(2), IntPoly::monomial(2)], &[10_000, 100_000, 1_000_000, 10_000_000]).unwrap();
        assert_eq!(r.degree_sum, "1");
        assert!(!r.hypothesis_holds);
        assert!(r.fs_fraction_decreasing);
        let counts: Vec<u64> = r.reports.iter().map(|x| x.fs_count).collect();
        // Independent big-integer shift-OR run.
        assert_eq!(counts, vec![1573, 13645, 96575, 193151]);
    }

    #[test]
    fn resource_errors_propagate() {
        let e = density_scan(&SetSpec::GammaSingle { a: 3 }, &[1 << 20], 1 << 10).unwrap_err();
        assert!(e.is_budget_refusal());
    }
}
