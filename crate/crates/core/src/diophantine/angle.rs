use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 256;
pub const MIN_PRECISION: u32 = 64;
pub const MAX_PRECISION: u32 = 8192;
/// Orbit computations require `n · err ≤ 2^-ORBIT_BUDGET_BITS`.
pub const ORBIT_BUDGET_BITS: u32 = 32;

/// Where an angle comes from; the value can be regenerated at any precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AngleOrigin {
    /// `p/q mod 1`.
    Rational { p: u64, q: u64 },
    /// Fractional part of `√m`, `m` not a square.
    Sqrt { m: u64 },
    /// `[a0; a1, …, ak, (p1, …, pr)]`; an empty period means a finite expansion.
    ContinuedFraction { terms: Vec<u64>, period: Vec<u64> },
    /// `Σ_{k≥1} 2^{-k²}`: binary digits with no two adjacent ones.
    BinarySquares,
}

impl AngleOrigin {
    pub fn golden() -> Self {
        AngleOrigin::ContinuedFraction {
            terms: vec![0],
            period: vec![1],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AngleOrigin::Rational { q, .. } if *q == 0 => {
                Err(Error::invalid("rational angle with zero denominator"))
            }
            AngleOrigin::Sqrt { m } => {
                let r = m.sqrt();
                if r * r == *m {
                    Err(Error::invalid(format!(
                        "sqrt:{m} is rational; use rational:{r}/1"
                    )))
                } else {
                    Ok(())
                }
            }
            AngleOrigin::ContinuedFraction { terms, period } => {
                if terms.is_empty() {
                    return Err(Error::invalid("continued fraction needs a0"));
                }
                if terms[1..].iter().chain(period).any(|&a| a == 0) {
                    return Err(Error::invalid(
                        "continued fraction partial quotients after a0 must be positive",
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `frac(α)` as a reduced fraction, when `α` is rational.
    pub fn as_rational(&self) -> Option<(BigUint, BigUint)> {
        match self {
            AngleOrigin::Rational { p, q } => {
                let (p, q) = (BigUint::from(p % q), BigUint::from(*q));
                let g = p.gcd(&q);
                Some((&p / &g, &q / &g))
            }
            AngleOrigin::ContinuedFraction { terms, period } if period.is_empty() => {
                // Evaluate [0; a1, …, ak] from the tail.
                let mut num = BigUint::zero();
                let mut den = BigUint::one();
                for &a in terms[1..].iter().rev() {
                    // x ← 1 / (a + x)
                    let new_den = BigUint::from(a) * &den + &num;
                    num = den;
                    den = new_den;
                }
                let g = num.gcd(&den);
                Some((&num / &g, &den / &g))
            }
            _ => None,
        }
    }

    pub fn is_irrational(&self) -> bool {
        self.as_rational().is_none()
    }

    /// Quadratic irrationals, the only inputs whose bounded partial quotients are known.
    pub fn is_badly_approximable(&self) -> bool {
        matches!(self, AngleOrigin::Sqrt { .. })
            || matches!(self, AngleOrigin::ContinuedFraction { period, .. } if !period.is_empty())
    }
}

impl fmt::Display for AngleOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleOrigin::Rational { p, q } => write!(f, "rational:{p}/{q}"),
            AngleOrigin::Sqrt { m } => write!(f, "sqrt:{m}"),
            AngleOrigin::ContinuedFraction { terms, period } => {
                write!(f, "cf:[{}", terms[0])?;
                let rest: Vec<String> = terms[1..].iter().map(u64::to_string).collect();
                let mut parts = rest;
                if !period.is_empty() {
                    let p: Vec<String> = period.iter().map(u64::to_string).collect();
                    parts.push(format!("({})", p.join(",")));
                }
                if !parts.is_empty() {
                    write!(f, ";{}", parts.join(","))?;
                }
                write!(f, "]")
            }
            AngleOrigin::BinarySquares => write!(f, "binary-squares"),
        }
    }
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: expected a nonnegative integer, got {s:?}")))
}

impl FromStr for AngleOrigin {
    type Err = Error;

    /// Accepts `rational:p/q`, `sqrt:m`, `cf:[a0;a1,…,(p1,…)]`, `golden`, `binary-squares`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let origin = if s == "golden" {
            AngleOrigin::golden()
        } else if s == "binary-squares" {
            AngleOrigin::BinarySquares
        } else if let Some(rest) = s.strip_prefix("rational:") {
            let (p, q) = rest
                .split_once('/')
                .ok_or_else(|| Error::Parse(format!("expected rational:p/q, got {s:?}")))?;
            AngleOrigin::Rational {
                p: parse_u64(p, "numerator")?,
                q: parse_u64(q, "denominator")?,
            }
        } else if let Some(rest) = s.strip_prefix("sqrt:") {
            AngleOrigin::Sqrt {
                m: parse_u64(rest, "radicand")?,
            }
        } else if let Some(rest) = s.strip_prefix("cf:") {
            parse_cf(rest)?
        } else {
            return Err(Error::Parse(format!(
                "unknown angle {s:?}; expected rational:p/q, sqrt:m, cf:[...], golden or binary-squares"
            )));
        };
        origin.validate()?;
        Ok(origin)
    }
}

fn parse_cf(s: &str) -> Result<AngleOrigin> {
    let bad = || Error::Parse(format!("expected cf:[a0;a1,...,(p1,...)], got {s:?}"));
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(bad)?;
    let (head, tail) = match inner.split_once(';') {
        Some((h, t)) => (h, t.trim()),
        None => (inner, ""),
    };
    let terms0 = parse_u64(head, "a0")?;
    let (body, period_text) = match tail.find('(') {
        Some(i) => {
            let per = tail[i..]
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(bad)?;
            (tail[..i].trim().trim_end_matches(',').trim(), Some(per))
        }
        None => (tail, None),
    };
    let list = |t: &str, what: &str| -> Result<Vec<u64>> {
        if t.trim().is_empty() {
            return Ok(Vec::new());
        }
        t.split(',').map(|x| parse_u64(x, what)).collect()
    };
    let mut terms = vec![terms0];
    terms.extend(list(body, "partial quotient")?);
    let period = match period_text {
        Some(p) => {
            let v = list(p, "periodic partial quotient")?;
            if v.is_empty() {
                return Err(bad());
            }
            v
        }
        None => Vec::new(),
    };
    Ok(AngleOrigin::ContinuedFraction { terms, period })
}

impl TryFrom<String> for AngleOrigin {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AngleOrigin> for String {
    fn from(o: AngleOrigin) -> String {
        o.to_string()
    }
}

/// A point of `𝕋` as `value / 2^P` with absolute error at most `err_ulps / 2^P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    value: BigUint,
    precision: u32,
    err_ulps: BigUint,
}

impl Fixed {
    pub fn new(value: BigUint, precision: u32, err_ulps: BigUint) -> Self {
        let mask = (BigUint::one() << precision) - 1u32;
        Fixed {
            value: value & mask,
            precision,
            err_ulps,
        }
    }

    pub fn zero(precision: u32) -> Self {
        Fixed::new(BigUint::zero(), precision, BigUint::zero())
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn err_ulps(&self) -> &BigUint {
        &self.err_ulps
    }

    fn one_ulp_modulus(&self) -> BigUint {
        BigUint::one() << self.precision
    }

    fn wrap(&self, v: BigUint) -> BigUint {
        if v >= self.one_ulp_modulus() {
            v & ((BigUint::one() << self.precision) - 1u32)
        } else {
            v
        }
    }

    /// `n·x mod 1`; error becomes `n·err + 1` ulp.
    pub fn mul_int(&self, n: &BigUint) -> Fixed {
        Fixed {
            value: self.wrap(&self.value * n),
            precision: self.precision,
            err_ulps: &self.err_ulps * n + 1u32,
        }
    }

    pub fn add(&self, other: &Fixed) -> Fixed {
        assert_eq!(self.precision, other.precision, "precision mismatch");
        Fixed {
            value: self.wrap(&self.value + &other.value),
            precision: self.precision,
            err_ulps: &self.err_ulps + &other.err_ulps,
        }
    }

    pub fn sub(&self, other: &Fixed) -> Fixed {
        assert_eq!(self.precision, other.precision, "precision mismatch");
        let v = if self.value >= other.value {
            &self.value - &other.value
        } else {
            self.one_ulp_modulus() + &self.value - &other.value
        };
        Fixed {
            value: v,
            precision: self.precision,
            err_ulps: &self.err_ulps + &other.err_ulps,
        }
    }

    /// `‖x‖` in ulps.
    pub fn norm_ulps(&self) -> BigUint {
        let m = self.one_ulp_modulus();
        let other = &m - &self.value;
        if other < self.value {
            other
        } else {
            self.value.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        ulps_to_f64(&self.value, self.precision)
    }

    pub fn err_f64(&self) -> f64 {
        ulps_to_f64(&self.err_ulps, self.precision)
    }

    /// Same value re-expressed at a higher precision (no new information).
    pub fn widen(&self, precision: u32) -> Fixed {
        assert!(precision >= self.precision);
        let s = precision - self.precision;
        Fixed {
            value: &self.value << s,
            precision,
            err_ulps: &self.err_ulps << s,
        }
    }
}

/// `u / 2^p` as a float, rounding toward zero in the last bits.
pub(crate) fn ulps_to_f64(u: &BigUint, p: u32) -> f64 {
    let bits = u.bits();
    if bits == 0 {
        return 0.0;
    }
    let shift = bits.saturating_sub(64);
    let top = (u >> shift).to_u64().unwrap() as f64;
    let exp = shift as i64 - p as i64;
    top * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

/// An angle together with its origin, valid to `err`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Angle {
    origin: AngleOrigin,
    fixed: Fixed,
}

fn check_precision(p: u32) -> Result<()> {
    if !(MIN_PRECISION..=MAX_PRECISION).contains(&p) {
        return Err(Error::invalid(format!(
            "precision {p} outside {MIN_PRECISION}..={MAX_PRECISION}"
        )));
    }
    Ok(())
}

impl Angle {
    pub fn new(origin: AngleOrigin, precision: u32) -> Result<Angle> {
        origin.validate()?;
        check_precision(precision)?;
        let fixed = match (&origin, origin.as_rational()) {
            (_, Some((p, q))) => {
                let (value, rem) = (p << precision).div_rem(&q);
                let err = if rem.is_zero() { 0u32 } else { 1 };
                Fixed::new(value, precision, BigUint::from(err))
            }
            (AngleOrigin::Sqrt { m }, None) => {
                let scaled = (BigUint::from(*m) << (2 * precision)).sqrt();
                let int_part = BigUint::from(m.sqrt()) << precision;
                Fixed::new(scaled - int_part, precision, BigUint::one())
            }
            (AngleOrigin::ContinuedFraction { terms, period }, None) => {
                cf_fixed(terms, period, precision)
            }
            (AngleOrigin::BinarySquares, None) => {
                let mut v = BigUint::zero();
                let mut k = 1u32;
                while k * k <= precision {
                    v.set_bit((precision - k * k) as u64, true);
                    k += 1;
                }
                Fixed::new(v, precision, BigUint::one())
            }
            (AngleOrigin::Rational { .. }, None) => unreachable!(),
        };
        Ok(Angle { origin, fixed })
    }

    pub fn parse(text: &str, precision: u32) -> Result<Angle> {
        Angle::new(text.parse()?, precision)
    }

    pub fn origin(&self) -> &AngleOrigin {
        &self.origin
    }

    pub fn fixed(&self) -> &Fixed {
        &self.fixed
    }

    pub fn precision(&self) -> u32 {
        self.fixed.precision
    }

    pub fn to_f64(&self) -> f64 {
        self.fixed.to_f64()
    }

    pub fn err_f64(&self) -> f64 {
        self.fixed.err_f64()
    }

    pub fn at_precision(&self, precision: u32) -> Result<Angle> {
        Angle::new(self.origin.clone(), precision)
    }

    /// Bits needed so that `max_mult · err ≤ 2^-budget_bits`.
    pub fn required_precision(&self, max_mult: &BigUint, budget_bits: u32) -> u64 {
        let err = (&self.fixed.err_ulps).max(&BigUint::one()).clone();
        (max_mult * err).bits() + budget_bits as u64
    }

    pub fn check_budget(&self, max_mult: &BigUint, budget_bits: u32) -> Result<()> {
        let need = self.required_precision(max_mult, budget_bits);
        if need > self.precision() as u64 {
            return Err(Error::Precision {
                required_bits: need,
                ceiling_bits: MAX_PRECISION,
            });
        }
        Ok(())
    }

    /// This angle, regenerated by doubling precision until the budget holds.
    pub fn escalated_for(&self, max_mult: &BigUint, budget_bits: u32) -> Result<Angle> {
        let mut a = self.clone();
        loop {
            let need = a.required_precision(max_mult, budget_bits);
            if need <= a.precision() as u64 {
                return Ok(a);
            }
            if a.precision() >= MAX_PRECISION {
                return Err(Error::Precision {
                    required_bits: need,
                    ceiling_bits: MAX_PRECISION,
                });
            }
            a = a.at_precision((a.precision() * 2).min(MAX_PRECISION))?;
        }
    }
}

/// Periodic expansion truncated at the first convergent with `q² ≥ 2^(P+1)`,
/// so the truncation error is below half an ulp.
fn cf_fixed(terms: &[u64], period: &[u64], precision: u32) -> Fixed {
    let limit = BigUint::one() << (precision + 1);
    let (mut p0, mut q0) = (BigUint::one(), BigUint::zero());
    let (mut p1, mut q1) = (BigUint::zero(), BigUint::one());
    let quotients = terms[1..].iter().chain(period.iter().cycle());
    for &a in quotients {
        let a = BigUint::from(a);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        if &q1 * &q1 >= limit {
            break;
        }
    }
    let value = (p1 << precision) / q1;
    Fixed::new(value, precision, BigUint::from(2u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_third() {
        let a = Angle::parse("rational:1/3", 256).unwrap();
        assert!(a.fixed().err_ulps() <= &BigUint::one());
        // 0.010101… in binary.
        let v = a.fixed().value();
        assert!(!v.bit(255) && v.bit(254) && !v.bit(253) && v.bit(252));
        assert!((a.to_f64() - 1.0 / 3.0).abs() < 1e-15);
        let half = Angle::parse("rational:5/2", 128).unwrap();
        assert!(half.fixed().err_ulps().is_zero());
        assert_eq!(half.to_f64(), 0.5);
    }

    #[test]
    fn sqrt_two() {
        let a = Angle::parse("sqrt:2", 256).unwrap();
        assert!((a.to_f64() - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-15);
        assert!(a.err_f64() <= 2f64.powi(-254));
        assert!(Angle::parse("sqrt:9", 256).is_err());
    }

    #[test]
    fn golden_from_depth_fifty_literal() {
        let ones = vec!["1"; 50].join(",");
        let a = Angle::parse(&format!("cf:[0;{ones}]"), 256).unwrap();
        assert!(!a.origin().is_irrational());
        assert!((a.to_f64() - 0.618_033_988_749_895).abs() < 1e-15);
        let g = Angle::new(AngleOrigin::golden(), 256).unwrap();
        assert!((g.to_f64() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn periodic_cf_matches_sqrt() {
        let cf = Angle::parse("cf:[1;(2)]", 512).unwrap();
        let sq = Angle::parse("sqrt:2", 512).unwrap();
        let diff = cf.fixed().sub(sq.fixed()).norm_ulps();
        assert!(diff <= BigUint::from(3u32));
    }

    #[test]
    fn precision_doubling_consistent() {
        for text in ["sqrt:2", "sqrt:7", "golden", "binary-squares", "rational:2/7"] {
            let lo = Angle::parse(text, 256).unwrap();
            let hi = Angle::parse(text, 512).unwrap();
            let d = lo.fixed().widen(512).sub(hi.fixed());
            let bound = lo.fixed().err_ulps() << 256u32;
            assert!(d.norm_ulps() <= bound + hi.fixed().err_ulps(), "{text}");
        }
    }

    #[test]
    fn origin_round_trip() {
        for text in [
            "rational:3/7",
            "sqrt:5",
            "cf:[0;(1)]",
            "cf:[2;1,1,(3,4)]",
            "cf:[0;2,2,2]",
            "cf:[4]",
            "binary-squares",
        ] {
            let o: AngleOrigin = text.parse().unwrap();
            assert_eq!(o.to_string(), text);
            let json = serde_json::to_string(&o).unwrap();
            assert_eq!(serde_json::from_str::<AngleOrigin>(&json).unwrap(), o);
        }
        assert!("cf:[0;0,1]".parse::<AngleOrigin>().is_err());
        assert!("rational:1/0".parse::<AngleOrigin>().is_err());
        assert!("pi".parse::<AngleOrigin>().is_err());
    }

    #[test]
    fn budget_escalation() {
        let a = Angle::parse("sqrt:2", 64).unwrap();
        let huge = BigUint::one() << 100u32;
        assert!(matches!(
            a.check_budget(&huge, ORBIT_BUDGET_BITS),
            Err(Error::Precision { .. })
        ));
        let b = a.escalated_for(&huge, ORBIT_BUDGET_BITS).unwrap();
        assert_eq!(b.precision(), 256);
        let too_big = BigUint::one() << 9000u32;
        assert!(a.escalated_for(&too_big, ORBIT_BUDGET_BITS).is_err());
    }

    #[test]
    fn norm_and_mul() {
        let a = Angle::parse("rational:1/4", 128).unwrap();
        let three = a.fixed().mul_int(&BigUint::from(3u32));
        assert_eq!(three.to_f64(), 0.75);
        assert_eq!(ulps_to_f64(&three.norm_ulps(), 128), 0.25);
    }
}
