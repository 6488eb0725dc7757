use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::diophantine::{ulps_to_f64, Angle, ORBIT_BUDGET_BITS};
use crate::error::{Error, Result};
use crate::sets::SortedSet;

const CHECKPOINTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumTrend {
    Growing,
    Plateauing,
}

/// Partial sums of `Σ ‖nα‖` over the first `terms` elements. A finite prefix
/// cannot decide divergence; the trend is a heuristic.
#[derive(Clone, Debug, Serialize)]
pub struct DivergenceProbe {
    pub alpha: String,
    pub precision: u32,
    pub terms: usize,
    /// `(k, S_k)`: sum over the first `k` elements.
    pub checkpoints: Vec<(usize, f64)>,
    pub total: f64,
    /// Bound on the accumulated error of `total`.
    pub total_err: f64,
    pub first_half: f64,
    pub second_half: f64,
    /// `total / terms`.
    pub slope: f64,
    /// Growing iff the second-half increment is at least a quarter of the first.
    pub trend: SumTrend,
    pub heuristic: bool,
}

pub fn divergence_probe(c: &SortedSet, alpha: &Angle, terms: usize) -> Result<DivergenceProbe> {
    let terms = terms.min(c.len());
    if terms < 2 {
        return Err(Error::invalid("divergence probe needs at least two terms"));
    }
    let elems = &c.elements()[..terms];
    let max = BigUint::from(elems[terms - 1]);
    alpha.check_budget(&max, ORBIT_BUDGET_BITS)?;
    let p = alpha.precision();
    let fixed = alpha.fixed();
    let norms: Vec<(BigUint, BigUint)> = elems
        .par_iter()
        .map(|&n| {
            let x = fixed.mul_int(&BigUint::from(n));
            (x.norm_ulps(), x.err_ulps().clone())
        })
        .collect();

    let stride = terms.div_ceil(CHECKPOINTS);
    let half = terms / 2;
    let mut sum = BigUint::default();
    let mut err = BigUint::default();
    let mut at_half = BigUint::default();
    let mut checkpoints = Vec::new();
    for (i, (v, e)) in norms.iter().enumerate() {
        sum += v;
        err += e;
        let k = i + 1;
        if k == half {
            at_half = sum.clone();
        }
        if k % stride == 0 || k == terms {
            checkpoints.push((k, ulps_to_f64(&sum, p)));
        }
    }
    let second = &sum - &at_half;
    let trend = if &second * 4u32 >= at_half {
        SumTrend::Growing
    } else {
        SumTrend::Plateauing
    };
    let total = ulps_to_f64(&sum, p);
    Ok(DivergenceProbe {
        alpha: alpha.origin().to_string(),
        precision: p,
        terms,
        checkpoints,
        total,
        total_err: ulps_to_f64(&err, p),
        first_half: ulps_to_f64(&at_half, p),
        second_half: ulps_to_f64(&second, p),
        slope: total / terms as f64,
        trend,
        heuristic: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::{convergents, DEFAULT_PRECISION};
    use crate::sets::{enumerate, SetSpec};
    use num_traits::ToPrimitive;

    fn sqrt2() -> Angle {
        Angle::parse("sqrt:2", DEFAULT_PRECISION).unwrap()
    }

    #[test]
    fn naturals_grow_with_slope_one_quarter() {
        let n = SortedSet::from_unsorted((1..=1000).collect(), 1000).unwrap();
        let d = divergence_probe(&n, &sqrt2(), 1000).unwrap();
        assert_eq!(d.trend, SumTrend::Growing);
        // 60-digit reference: 250.078210... over 1000 terms.
        assert!((d.total - 250.07821).abs() < 1e-3, "{}", d.total);
        assert!((d.slope - 0.25).abs() < 0.01);
        assert!(d.total_err < 1e-60);
        assert_eq!(d.checkpoints.last().unwrap().0, 1000);
    }

    #[test]
    fn convergent_denominators_plateau() {
        let cf = convergents(&sqrt2(), 30);
        let qs: Vec<u64> = cf.convergents.iter().filter_map(|(_, q)| q.to_u64()).collect();
        let c = SortedSet::from_unsorted(qs, u64::MAX >> 1).unwrap();
        let d = divergence_probe(&c, &sqrt2(), 30).unwrap();
        assert_eq!(d.trend, SumTrend::Plateauing);
        assert!(d.total < 1.0);
    }

    #[test]
    fn gamma_two_three_grows() {
        let g = enumerate(&SetSpec::GammaAB { a: 2, b: 3 }, 1_000_000).unwrap();
        let d = divergence_probe(&g, &sqrt2(), usize::MAX).unwrap();
        assert_eq!(d.terms, 142);
        assert_eq!(d.trend, SumTrend::Growing);
        // 60-digit reference: halves 18.4521931638 and 17.7972786528.
        assert!((d.first_half - 18.4521931638).abs() < 1e-9);
        assert!((d.second_half - 17.7972786528).abs() < 1e-9);
    }

    #[test]
    fn refuses_beyond_the_budget() {
        let c = SortedSet::from_unsorted(vec![1, u64::MAX >> 2], u64::MAX >> 1).unwrap();
        let a = Angle::parse("sqrt:2", 64).unwrap();
        match divergence_probe(&c, &a, 2) {
            Err(Error::Precision { required_bits, .. }) => assert!(required_bits > 64),
            other => panic!("expected a precision refusal, got {other:?}"),
        }
    }
}
