use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::angle::{ulps_to_f64, Angle, Fixed, MAX_PRECISION};
use crate::error::{Error, Result};
use crate::sets::SortedSet;

/// Minimizer of `‖nα − β‖` over an integer range.
#[derive(Clone, Debug, Serialize)]
pub struct NormHit {
    pub n: u64,
    pub norm: f64,
    pub norm_err: f64,
    pub precision: u32,
    /// Rigorous upper bound on the norm.
    #[serde(skip)]
    pub norm_upper: BigRational,
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rational_hit(
    (p, q): (BigUint, BigUint),
    beta: Option<(BigUint, BigUint)>,
    lo: u64,
    hi: u64,
) -> NormHit {
    let (pb, qb) = beta.unwrap_or((BigUint::zero(), BigUint::one()));
    let modulus = &q * &qb;
    let offset = &pb * &q;
    // Values repeat with period q, and earlier n win ties.
    let period_end = hi.min(lo.saturating_add(q.to_u64().unwrap_or(u64::MAX)));
    let mut best: Option<(BigUint, u64)> = None;
    for n in lo..period_end {
        let r = (BigUint::from(n) * &p * &qb + &modulus - (&offset % &modulus)) % &modulus;
        let other = &modulus - &r;
        let d = if other < r { other } else { r };
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, n));
        }
    }
    let (d, n) = best.expect("nonempty range");
    let norm_upper = ratio(d, modulus);
    NormHit {
        n,
        norm: norm_upper.to_f64().unwrap_or(f64::NAN),
        norm_err: 0.0,
        precision: 0,
        norm_upper,
    }
}

/// Argmin of `‖nα − β‖` for `lo ≤ n < hi`, ties going to the smaller `n`.
///
/// When the two best candidates are within twice the accumulated error the
/// scan is repeated at doubled precision, up to the global ceiling.
pub fn min_norm_in_range(alpha: &Angle, lo: u64, hi: u64, beta: Option<&Angle>) -> Result<NormHit> {
    if lo < 1 || hi <= lo {
        return Err(Error::invalid(format!("empty or invalid range [{lo}, {hi})")));
    }
    let beta_rational = match beta {
        None => Some(None),
        Some(b) => b.origin().as_rational().map(Some),
    };
    if let (Some(ar), Some(br)) = (alpha.origin().as_rational(), beta_rational) {
        return Ok(rational_hit(ar, br, lo, hi));
    }
    let mut alpha = alpha.clone();
    let mut beta = beta.cloned();
    loop {
        let p = alpha.precision();
        let b = match &beta {
            Some(b) => b.fixed().clone(),
            None => Fixed::zero(p),
        };
        let step = alpha.fixed();
        let mut x = step.mul_int(&BigUint::from(lo)).sub(&b);
        let err = step.err_ulps() * hi + 1u32 + b.err_ulps();
        let mut best: (BigUint, u64) = (x.norm_ulps(), lo);
        let mut second: Option<BigUint> = None;
        for n in lo + 1..hi {
            x = Fixed::new(x.value() + step.value(), p, BigUint::zero());
            let d = x.norm_ulps();
            if d < best.0 {
                second = Some(std::mem::replace(&mut best, (d, n)).0);
            } else if second.as_ref().is_none_or(|s| d < *s) {
                second = Some(d);
            }
        }
        let separated = match &second {
            None => true,
            Some(s) => *s > &best.0 + &err * 2u32,
        };
        if separated {
            let upper = &best.0 + &err;
            return Ok(NormHit {
                n: best.1,
                norm: ulps_to_f64(&best.0, p),
                norm_err: ulps_to_f64(&err, p),
                precision: p,
                norm_upper: ratio(upper, BigUint::one() << p),
            });
        }
        if p >= MAX_PRECISION {
            return Err(Error::Precision {
                required_bits: 2 * MAX_PRECISION as u64,
                ceiling_bits: MAX_PRECISION,
            });
        }
        let next = (p * 2).min(MAX_PRECISION);
        alpha = alpha.at_precision(next)?;
        beta = beta.map(|b| b.at_precision(next)).transpose()?;
    }
}

/// `n_k = argmin ‖nα − β‖` over each window `[m_k, m_{k+1})`.
pub fn observation_sequence(alpha: &Angle, beta: Option<&Angle>, m: &[u64]) -> Result<Vec<NormHit>> {
    if m.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("window starts must be strictly increasing"));
    }
    m.windows(2)
        .map(|w| min_norm_in_range(alpha, w[0], w[1], beta))
        .collect()
}

/// A sublacunary set with `Σ ‖n_k α‖` small, one element per cube window.
#[derive(Clone, Debug, Serialize)]
pub struct NcdConstruction {
    pub k0: u64,
    pub kmax: u64,
    pub set: SortedSet,
    pub norms: Vec<f64>,
    pub measured_sum: f64,
    /// `max_k ‖n_k α‖ · ((k+1)³ − k³)`, standing in for the constant of the construction.
    pub c_measured: f64,
    /// `C / (3(kmax + 1))`, which dominates `Σ_{k>kmax} C / ((k+1)³ − k³)`.
    pub tail_bound: f64,
    pub sigma: f64,
    #[serde(skip)]
    pub sigma_exact: BigRational,
}

fn cube_window(k: u64) -> Result<(u64, u64)> {
    let lo = k.checked_pow(3);
    let hi = (k + 1).checked_pow(3);
    match (lo, hi) {
        (Some(lo), Some(hi)) if hi <= crate::sets::MAX_ELEMENT => Ok((lo, hi)),
        _ => Err(Error::invalid(format!("cube window for k = {k} overflows"))),
    }
}

fn cube_hits(alpha: &Angle, k0: u64, kmax: u64) -> Result<Vec<NormHit>> {
    (k0..=kmax)
        .map(|k| {
            let (lo, hi) = cube_window(k)?;
            min_norm_in_range(alpha, lo, hi, None)
        })
        .collect()
}

fn assemble(k0: u64, kmax: u64, hits: &[NormHit]) -> Result<NcdConstruction> {
    let mut sum = BigRational::zero();
    let mut c = BigRational::zero();
    for (k, h) in (k0..=kmax).zip(hits) {
        sum += &h.norm_upper;
        let width = BigInt::from((k + 1).pow(3) - k.pow(3));
        let ck = &h.norm_upper * BigRational::from_integer(width);
        if ck > c {
            c = ck;
        }
    }
    let tail = &c / BigRational::from_integer(BigInt::from(3 * (kmax + 1)));
    let sigma_exact = &sum + &tail;
    let (_, hi) = cube_window(kmax)?;
    let set = SortedSet::from_unsorted(hits.iter().map(|h| h.n).collect(), hi - 1)?;
    Ok(NcdConstruction {
        k0,
        kmax,
        set,
        norms: hits.iter().map(|h| h.norm).collect(),
        measured_sum: sum.to_f64().unwrap_or(f64::NAN),
        c_measured: c.to_f64().unwrap_or(f64::NAN),
        tail_bound: tail.to_f64().unwrap_or(f64::NAN),
        sigma: sigma_exact.to_f64().unwrap_or(f64::NAN),
        sigma_exact,
    })
}

fn check_ncd_inputs(alpha: &Angle, k0: u64, kmax: u64) -> Result<()> {
    if !alpha.origin().is_badly_approximable() {
        return Err(Error::invalid(format!(
            "{} is not a quadratic irrational; the construction needs a badly approximable angle",
            alpha.origin()
        )));
    }
    if k0 < 1 || kmax < k0 {
        return Err(Error::invalid("need 1 <= k0 <= kmax"));
    }
    Ok(())
}

/// Builds `{n_k : k0 ≤ k ≤ kmax}` with `n_k` minimizing `‖nα‖` on `[k³, (k+1)³)`.
///
/// Fails unless the certified bound `σ` (measured sum plus tail) is below 1/2.
pub fn example_ncd_build(alpha: &Angle, k0: u64, kmax: u64) -> Result<NcdConstruction> {
    check_ncd_inputs(alpha, k0, kmax)?;
    let hits = cube_hits(alpha, k0, kmax)?;
    let c = assemble(k0, kmax, &hits)?;
    if c.sigma_exact >= BigRational::new(BigInt::one(), BigInt::from(2)) {
        return Err(Error::invalid(format!(
            "sigma bound {:.4} >= 1/2 at k0 = {k0}; try a larger k0",
            c.sigma
        )));
    }
    Ok(c)
}

/// Smallest `k0` whose construction up to `kmax` meets the `σ < 1/2` budget.
pub fn find_ncd_k0(alpha: &Angle, kmax: u64) -> Result<NcdConstruction> {
    check_ncd_inputs(alpha, 1, kmax)?;
    let hits = cube_hits(alpha, 1, kmax)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for k0 in 1..=kmax {
        let c = assemble(k0, kmax, &hits[(k0 - 1) as usize..])?;
        if c.sigma_exact < half {
            return Ok(c);
        }
    }
    Err(Error::invalid(format!(
        "no k0 <= {kmax} meets sigma < 1/2; raise kmax"
    )))
}
