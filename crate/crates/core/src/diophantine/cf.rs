use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Zero};
use serde::Serialize;

use super::angle::{Angle, AngleOrigin};

#[derive(Clone, Debug, Serialize)]
pub struct Convergents {
    pub alpha: AngleOrigin,
    #[serde(serialize_with = "crate::serde_dec::seq")]
    pub partial_quotients: Vec<BigUint>,
    /// `(p, q)` pairs, each checked against `|α − p/q| < 1/q²` in fixed point.
    #[serde(serialize_with = "crate::serde_dec::pairs")]
    pub convergents: Vec<(BigUint, BigUint)>,
    /// Fewer than the requested number were certified at this precision.
    pub truncated: bool,
}

/// Partial quotients of `frac(α)`: `(quotients, expansion ended exactly)`.
fn quotients(alpha: &Angle, count: usize) -> (Vec<BigUint>, bool) {
    match alpha.origin() {
        origin @ (AngleOrigin::Rational { .. }
        | AngleOrigin::ContinuedFraction { .. })
            if origin.as_rational().is_some() =>
        {
            let (mut p, mut q) = origin.as_rational().unwrap();
            let mut out = Vec::new();
            while out.len() < count {
                let (a, r) = p.div_rem(&q);
                out.push(a);
                if r.is_zero() {
                    return (out, true);
                }
                p = std::mem::replace(&mut q, r);
            }
            (out, false)
        }
        AngleOrigin::ContinuedFraction { terms, period } => {
            let out = std::iter::once(0u64)
                .chain(terms[1..].iter().copied())
                .chain(period.iter().copied().cycle())
                .take(count)
                .map(BigUint::from)
                .collect();
            (out, false)
        }
        AngleOrigin::Sqrt { m } => {
            let m = *m as u128;
            let a0 = m.sqrt();
            let (mut mm, mut d, mut a) = (0u128, 1u128, a0);
            let mut out = vec![BigUint::zero()];
            while out.len() < count {
                mm = d * a - mm;
                d = (m - mm * mm) / d;
                a = (a0 + mm) / d;
                out.push(BigUint::from(a));
            }
            (out, false)
        }
        AngleOrigin::BinarySquares => (interval_quotients(alpha, count), false),
        AngleOrigin::Rational { .. } => unreachable!(),
    }
}

/// Quotients shared by both ends of `[v − err, v + err]`.
fn interval_quotients(alpha: &Angle, count: usize) -> Vec<BigUint> {
    let f = alpha.fixed();
    let den = BigUint::one() << f.precision();
    let lo_num = if f.value() > f.err_ulps() {
        f.value() - f.err_ulps()
    } else {
        BigUint::zero()
    };
    let mut lo = (lo_num, den.clone());
    let mut hi = (f.value() + f.err_ulps(), den);
    let mut out = Vec::new();
    while out.len() < count {
        let (qa, ra) = lo.0.div_rem(&lo.1);
        let (qb, rb) = hi.0.div_rem(&hi.1);
        if qa != qb {
            break;
        }
        out.push(qa);
        if ra.is_zero() || rb.is_zero() {
            break;
        }
        lo = (std::mem::take(&mut lo.1), ra);
        hi = (std::mem::take(&mut hi.1), rb);
    }
    out
}

/// `|α − p/q| < 1/q²` holds for every value within the angle's error.
fn certified(alpha: &Angle, p: &BigUint, q: &BigUint) -> bool {
    let f = alpha.fixed();
    let scaled = BigInt::from(f.value() * q) - BigInt::from(p << f.precision());
    let lhs = (scaled.magnitude() + f.err_ulps() * q) * q;
    lhs < BigUint::one() << f.precision()
}

/// The first `depth` convergents of `frac(α)`.
pub fn convergents(alpha: &Angle, depth: usize) -> Convergents {
    let (qs, exact_end) = quotients(alpha, depth);
    let (mut p0, mut q0) = (BigUint::zero(), BigUint::one());
    let (mut p1, mut q1) = (BigUint::one(), BigUint::zero());
    let mut out = Vec::new();
    let mut used = Vec::new();
    for a in qs.iter() {
        let p = a * &p1 + &p0;
        let q = a * &q1 + &q0;
        if !certified(alpha, &p, &q) {
            break;
        }
        used.push(a.clone());
        out.push((p.clone(), q.clone()));
        p0 = std::mem::replace(&mut p1, p);
        q0 = std::mem::replace(&mut q1, q);
    }
    let complete = out.len() == qs.len() && (exact_end || out.len() == depth);
    Convergents {
        alpha: alpha.origin().clone(),
        partial_quotients: used,
        convergents: out,
        truncated: !complete,
    }
}
