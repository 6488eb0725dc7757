use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default probe bound for nonnegativity checks on `ℕ₀`.
pub const DEFAULT_PROBE_BOUND: u64 = 1_000_000;

/// Integer polynomial, coefficients indexed by power.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

/// Outcome of checking `P(n) ≥ 0` on the naturals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NonnegCheck {
    /// Every `n` in `0..=checked_up_to` was evaluated.
    pub checked_up_to: u64,
    /// True when the checked range reaches past the root bound, so the
    /// result holds on all of `ℕ₀`.
    pub global: bool,
}

impl IntPoly {
    /// Builds a nonconstant polynomial with positive leading coefficient.
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::invalid("polynomial must be nonconstant"));
        }
        if *coeffs.last().unwrap() < 0 {
            return Err(Error::invalid(
                "polynomial must have a positive leading coefficient",
            ));
        }
        Ok(IntPoly { coeffs })
    }

    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = 1;
        IntPoly::new(coeffs).expect("monomial of degree >= 1")
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    /// True for `x^d` exactly.
    pub fn is_monomial(&self) -> bool {
        self.leading() == 1 && self.coeffs[..self.degree()].iter().all(|&c| c == 0)
    }

    pub fn eval_i128(&self, x: i128) -> Option<i128> {
        self.coeffs
            .iter()
            .rev()
            .try_fold(0i128, |acc, &c| acc.checked_mul(x)?.checked_add(c as i128))
    }

    pub fn eval_big(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * x + BigInt::from(c))
    }

    /// Evaluates at a natural number, falling back to big integers on overflow.
    pub fn eval_u64(&self, x: u64) -> BigInt {
        match self.eval_i128(x as i128) {
            Some(v) => BigInt::from(v),
            None => self.eval_big(&BigInt::from(x)),
        }
    }

    /// `1 + max |c_i / c_d|`, rounded up. For `x` beyond this bound `P` has no
    /// real roots, and by Gauss–Lucas neither does `P'`, so `P` is positive and
    /// strictly increasing there.
    pub fn root_bound(&self) -> u64 {
        let lead = self.leading().unsigned_abs() as u128;
        let worst = self.coeffs[..self.degree()]
            .iter()
            .map(|c| (c.unsigned_abs() as u128).div_ceil(lead))
            .max()
            .unwrap_or(0);
        u64::try_from(worst + 1).unwrap_or(u64::MAX)
    }

    pub fn check_nonnegative(&self, probe_bound: u64) -> Result<NonnegCheck> {
        let root_bound = self.root_bound();
        let limit = root_bound.min(probe_bound);
        for n in 0..=limit {
            let v = match self.eval_i128(n as i128) {
                Some(v) => v.signum(),
                None => match self.eval_big(&BigInt::from(n)).sign() {
                    num_bigint::Sign::Minus => -1,
                    _ => 1,
                },
            };
            if v < 0 {
                return Err(Error::invalid(format!(
                    "polynomial {self} is negative at n = {n}"
                )));
            }
        }
        Ok(NonnegCheck {
            checked_up_to: limit,
            global: root_bound <= probe_bound,
        })
    }

    /// Membership in the class of nonconstant polynomials mapping `ℕ₀` into `ℕ₀` with `P(0) = 0`.
    pub fn check_vanishing_at_zero(&self, probe_bound: u64) -> Result<NonnegCheck> {
        if self.coeffs[0] != 0 {
            return Err(Error::invalid(format!(
                "polynomial {self} must satisfy P(0) = 0"
            )));
        }
        self.check_nonnegative(probe_bound)
    }

    /// Coefficients of `P(x + m)` by ascending power.
    pub fn shifted(&self, m: &BigInt) -> Vec<BigInt> {
        let d = self.degree();
        let mut out = vec![BigInt::zero(); d + 1];
        // Horner in the shifted basis: acc <- acc * (x + m) + c.
        for &c in self.coeffs.iter().rev() {
            let mut next = vec![BigInt::zero(); d + 1];
            for (j, a) in out.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                next[j] += a * m;
                if j + 1 <= d {
                    next[j + 1] += a;
                }
            }
            next[0] += BigInt::from(c);
            out = next;
        }
        out
    }

    /// Smallest `n ≥ 0` beyond which `P(n) > limit` holds for every larger `n` too.
    pub(crate) fn escape_index(&self, limit: u64) -> u64 {
        let mut n = self.root_bound();
        let target = BigInt::from(limit);
        while self.eval_u64(n) <= target {
            n += 1;
        }
        n
    }
}

impl TryFrom<Vec<i64>> for IntPoly {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        IntPoly::new(v)
    }
}

impl From<IntPoly> for Vec<i64> {
    fn from(p: IntPoly) -> Self {
        p.coeffs
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{a}x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Real-coefficient polynomial used for `{⌊P(n)⌋}` families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

/// Fractional parts closer than this to an integer are re-evaluated exactly.
const FLOOR_GUARD: f64 = 1.0 / (1u64 << 20) as f64;

impl RealPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("polynomial coefficients must be finite"));
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::invalid("polynomial must have degree >= 1"));
        }
        if *coeffs.last().unwrap() <= 0.0 {
            return Err(Error::invalid(
                "polynomial must have a positive leading coefficient",
            ));
        }
        Ok(RealPoly { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Every `f64` is a dyadic rational, so this evaluation is exact.
    fn eval_exact(&self, x: u64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(x));
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, &c| {
            acc * &x + BigRational::from_f64(c).expect("finite coefficient")
        })
    }

    /// `⌊P(n)⌋`, double precision with an exact fallback near integers.
    pub fn floor_at(&self, n: u64) -> BigInt {
        let v = self.eval_f64(n as f64);
        let frac = v - v.floor();
        if v.is_finite() && v.abs() < 1e15 && frac > FLOOR_GUARD && frac < 1.0 - FLOOR_GUARD {
            return BigInt::from_f64(v.floor()).unwrap();
        }
        self.eval_exact(n).floor().to_integer()
    }

    /// `1 + max |c_i / c_d|`, the real analogue of [`IntPoly::root_bound`].
    pub fn root_bound(&self) -> u64 {
        let lead = *self.coeffs.last().unwrap();
        let worst = self.coeffs[..self.degree()]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max);
        (worst.ceil() + 1.0).to_u64().unwrap_or(u64::MAX)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.fract() == 0.0)
    }
}

impl TryFrom<Vec<f64>> for RealPoly {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        RealPoly::new(v)
    }
}

impl From<RealPoly> for Vec<f64> {
    fn from(p: RealPoly) -> Self {
        p.coeffs
    }
}

/// `n ≥ 1`, rounded-up integer logarithm helpers shared by generators.
pub(crate) fn ilog_floor(base: u64, n: u64) -> u32 {
    debug_assert!(base >= 2 && n >= 1);
    n.ilog(base)
}

pub(crate) fn gcd_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0, |g, v| g.gcd(&v))
}
