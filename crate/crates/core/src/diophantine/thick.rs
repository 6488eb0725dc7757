use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use super::angle::{Angle, Fixed, MAX_PRECISION};
use crate::error::{Error, Result};

/// Exponent scan limit per recursion step.
pub const DEFAULT_SEARCH_CAP: u64 = 100_000;

/// Safety margin, in bits, between accumulated error and the target threshold.
const MARGIN_BITS: u64 = 64;

/// `k ↦ (π₁(k), π₂(k))` for `k = 1, 2, …`: diagonals `x + y = s` of
/// `{0, …, r−1} × ℕ₀`, in increasing `x` within each diagonal.
pub fn diagonal_pairing(r: usize, count: usize) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(count);
    let mut s = 0u64;
    while out.len() < count {
        for x in 0..=s {
            if (x as usize) < r && out.len() < count {
                out.push((x as usize, s - x));
            }
        }
        s += 1;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ThickStep {
    pub k: u64,
    pub base: u64,
    /// Block length parameter `π₂(k)`.
    pub run: u64,
    pub n_k: u64,
    /// Bit length of `M_k`.
    pub m_k_bits: u64,
    /// Precision at which `‖a^{N_k} α‖ ≤ 1/(k M_k)` was certified.
    pub precision: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThickLog {
    pub alpha: String,
    pub bases: Vec<u64>,
    pub depth_requested: u64,
    pub depth_achieved: u64,
    pub steps: Vec<ThickStep>,
    /// Why the recursion stopped early, if it did.
    pub stopped: Option<String>,
    pub products_checked: u64,
    pub products_failed: u64,
    /// Products too large to evaluate under the precision ceiling.
    pub products_skipped: u64,
    /// Every checked product satisfied `‖nα‖ ≤ 1/max(F)`.
    pub verified: bool,
}

enum Scan {
    Found(u64, u32),
    Cap,
    Ceiling,
}

/// Smallest `N ≥ 1` with `‖a^N α‖ ≤ 1/(k M)`, raising precision as the
/// error of repeated multiplication by `a` grows.
fn find_exponent(alpha: &Angle, a: u64, threshold_den: &BigUint, cap: u64) -> Result<Scan> {
    let a_big = BigUint::from(a);
    let log_a = 64 - a.leading_zeros() as u64;
    let mut precision = alpha.precision();
    let mut n = 1u64;
    'restart: loop {
        let angle = alpha.at_precision(precision)?;
        let mut x: Fixed = angle.fixed().mul_int(&Pow::pow(&a_big, n));
        while n <= cap {
            let p = x.precision();
            let one = BigUint::one() << p;
            // Need err · kM well below 1 for the comparison to mean anything.
            if (x.err_ulps() * threshold_den).bits() + MARGIN_BITS > p as u64 {
                let want = (n + 1) * log_a + threshold_den.bits() + 2 * MARGIN_BITS;
                if want > MAX_PRECISION as u64 {
                    return Ok(Scan::Ceiling);
                }
                precision = (want as u32).next_power_of_two().min(MAX_PRECISION);
                continue 'restart;
            }
            let d = x.norm_ulps();
            if (&d + x.err_ulps()) * threshold_den <= one {
                return Ok(Scan::Found(n, p));
            }
            n += 1;
            x = x.mul_int(&a_big);
        }
        return Ok(Scan::Cap);
    }
}

/// Recursive construction of exponents `N_k` whose blocks
/// `a_{π₁(k)}^{N_k + {0..π₂(k)}}` generate a thick set with `nα` clustering at 0.
pub fn adversarial_thick(bases: &[u64], alpha: &Angle, depth: u64, search_cap: u64) -> Result<ThickLog> {
    if bases.is_empty() || bases.iter().any(|&a| a < 2) {
        return Err(Error::invalid("bases must be integers >= 2"));
    }
    if !alpha.origin().is_irrational() {
        return Err(Error::invalid(format!(
            "{} is rational; its orbit under multiplication is eventually periodic",
            alpha.origin()
        )));
    }
    let pairing = diagonal_pairing(bases.len(), depth as usize);
    let mut steps: Vec<ThickStep> = Vec::new();
    let mut stopped = None;
    for (idx, &(i, run)) in pairing.iter().enumerate() {
        let k = idx as u64 + 1;
        let a = bases[i];
        let mut m_k: BigUint = Pow::pow(&BigUint::from(a), run);
        for s in &steps {
            m_k *= Pow::pow(&BigUint::from(s.base), s.n_k + s.run);
        }
        let threshold_den = &m_k * k;
        match find_exponent(alpha, a, &threshold_den, search_cap)? {
            Scan::Found(n_k, precision) => steps.push(ThickStep {
                k,
                base: a,
                run,
                n_k,
                m_k_bits: m_k.bits(),
                precision,
            }),
            Scan::Cap => {
                stopped = Some(format!("search cap {search_cap} reached at k = {k}"));
                break;
            }
            Scan::Ceiling => {
                stopped = Some(format!("precision ceiling {MAX_PRECISION} reached at k = {k}"));
                break;
            }
        }
    }
    let (checked, failed, skipped) = verify_products(alpha, &steps)?;
    Ok(ThickLog {
        alpha: alpha.origin().to_string(),
        bases: bases.to_vec(),
        depth_requested: depth,
        depth_achieved: steps.len() as u64,
        steps,
        stopped,
        products_checked: checked,
        products_failed: failed,
        products_skipped: skipped,
        verified: failed == 0,
    })
}

/// Checks `‖nα‖ ≤ 1/max(F)` for every `n = Π_{k∈F} a_k^{N_k + s_k}`, `0 ≤ s_k ≤ π₂(k)`.
fn verify_products(alpha: &Angle, steps: &[ThickStep]) -> Result<(u64, u64, u64)> {
    let (mut checked, mut failed, mut skipped) = (0u64, 0u64, 0u64);
    let r = steps.len();
    for mask in 1u64..(1u64 << r) {
        let members: Vec<&ThickStep> = (0..r).filter(|i| mask >> i & 1 == 1).map(|i| &steps[i]).collect();
        let kmax = members.iter().map(|s| s.k).max().unwrap();
        let mut offsets = vec![0u64; members.len()];
        loop {
            let mut n = BigUint::one();
            for (s, &o) in members.iter().zip(&offsets) {
                n *= Pow::pow(&BigUint::from(s.base), s.n_k + o);
            }
            let need = n.bits() + 64 - kmax.leading_zeros() as u64 + MARGIN_BITS;
            if need > MAX_PRECISION as u64 {
                skipped += 1;
            } else {
                let p = (need as u32).next_power_of_two().max(alpha.precision()).min(MAX_PRECISION);
                let x = alpha.at_precision(p)?.fixed().mul_int(&n);
                let one = BigUint::one() << p;
                checked += 1;
                if (x.norm_ulps() + x.err_ulps()) * kmax > one {
                    failed += 1;
                }
            }
            // Odometer over the offsets.
            let mut j = 0;
            loop {
                if j == members.len() {
                    break;
                }
                if offsets[j] < members[j].run {
                    offsets[j] += 1;
                    break;
                }
                offsets[j] = 0;
                j += 1;
            }
            if j == members.len() {
                break;
            }
        }
    }
    Ok((checked, failed, skipped))
}
