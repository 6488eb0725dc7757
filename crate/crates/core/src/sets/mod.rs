//! Integer-set families, materialized as sorted prefixes up to a bound.

mod poly;
mod primes;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub use poly::{IntPoly, NonnegCheck, RealPoly, DEFAULT_PROBE_BOUND};
pub use primes::{is_prime, primes_up_to};

pub(crate) use poly::{gcd_all, ilog_floor};

use crate::error::{Error, Result};

/// Largest admissible element; members above this are never materialized.
pub const MAX_ELEMENT: u64 = i64::MAX as u64;

/// Sieve ceiling for families indexed by primes.
const MAX_PRIME_SIEVE: u64 = 1 << 32;

/// Exponent index set for `a^S b^T` families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentSet {
    /// Explicit exponents.
    List(Vec<u64>),
    /// `{start, start + step, start + 2·step, ...}`.
    Progression { start: u64, step: u64 },
    /// Exponents drawn from another family.
    Family(Box<SetSpec>),
}

impl ExponentSet {
    fn validate(&self) -> Result<()> {
        match self {
            ExponentSet::List(v) if v.is_empty() => {
                Err(Error::invalid("exponent list must be nonempty"))
            }
            ExponentSet::Progression { step: 0, .. } => {
                Err(Error::invalid("exponent progression step must be >= 1"))
            }
            ExponentSet::Family(spec) => spec.validate(),
            _ => Ok(()),
        }
    }

    /// Exponents `≤ cap`, sorted and deduplicated.
    fn materialize(&self, cap: u64) -> Result<Vec<u64>> {
        Ok(match self {
            ExponentSet::List(v) => {
                let s: BTreeSet<u64> = v.iter().copied().filter(|&e| e <= cap).collect();
                s.into_iter().collect()
            }
            ExponentSet::Progression { start, step } => {
                let mut out = Vec::new();
                let mut e = *start;
                while e <= cap {
                    out.push(e);
                    e += step;
                }
                out
            }
            ExponentSet::Family(spec) => {
                if cap == 0 {
                    Vec::new()
                } else {
                    enumerate(spec, cap)?.elements
                }
            }
        })
    }
}

/// Description of an integer-set family by its generating parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum SetSpec {
    /// Multiplicative semigroup `{aⁿ bᵐ : n, m ≥ 0}`.
    #[serde(rename = "gamma")]
    GammaAB { a: u64, b: u64 },
    /// Powers `{aⁿ : n ≥ 0}`.
    GammaSingle { a: u64 },
    /// `{aⁿ b_m : n ≥ 0, b_m ∈ bs}`.
    PowerTimesFinite { a: u64, bs: Vec<u64> },
    /// `{∏ a_i^{P_i(n_i)} : n_i ≥ 0}`.
    PolyPowerProduct { bases: Vec<u64>, polys: Vec<IntPoly> },
    /// `S^ℕ₀`, the union of the powers of each base.
    GeometricUnion { bases: Vec<u64> },
    /// `{⌊P(n)⌋ : n ≥ 1}` for a real polynomial.
    FloorPoly { poly: RealPoly },
    /// `{P(p) : p prime}`.
    PolyOfPrimes { poly: IntPoly },
    /// `{⌊f(n)⌋}` for a tabulated `f(1), f(2), ...`.
    FloorTabulated { values: Vec<f64> },
    /// `a^S b^T`.
    PowerSTimesPowerT {
        a: u64,
        b: u64,
        s: ExponentSet,
        t: ExponentSet,
    },
    /// Products of distinct elements of `bases` (empty product excluded).
    FiniteProduct { bases: Vec<u64> },
    Explicit { elements: Vec<u64> },
}

fn check_base(name: &str, a: u64) -> Result<()> {
    if a < 2 {
        return Err(Error::invalid(format!("{name} must be >= 2, got {a}")));
    }
    Ok(())
}

impl SetSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SetSpec::GammaAB { a, b } => {
                check_base("a", *a)?;
                check_base("b", *b)
            }
            SetSpec::GammaSingle { a } => check_base("a", *a),
            SetSpec::PowerTimesFinite { a, bs } => {
                check_base("a", *a)?;
                if bs.is_empty() {
                    return Err(Error::invalid("bs must be nonempty"));
                }
                if bs.contains(&0) {
                    return Err(Error::invalid("every b_m must be >= 1"));
                }
                Ok(())
            }
            SetSpec::PolyPowerProduct { bases, polys } => {
                if bases.is_empty() || bases.len() != polys.len() {
                    return Err(Error::invalid(
                        "bases and polys must be nonempty and of equal length",
                    ));
                }
                for &a in bases {
                    check_base("base", a)?;
                }
                for p in polys {
                    p.check_vanishing_at_zero(DEFAULT_PROBE_BOUND)?;
                }
                Ok(())
            }
            SetSpec::GeometricUnion { bases } => {
                if bases.is_empty() {
                    return Err(Error::invalid("bases must be nonempty"));
                }
                let mut roots = BTreeSet::new();
                for &a in bases {
                    check_base("base", a)?;
                    let (root, _) = minimal_root(a);
                    if !roots.insert(root) {
                        return Err(Error::invalid(format!(
                            "two bases are powers of the same integer {root}"
                        )));
                    }
                }
                Ok(())
            }
            SetSpec::FloorPoly { .. } => Ok(()),
            SetSpec::PolyOfPrimes { poly } => {
                poly.check_nonnegative(DEFAULT_PROBE_BOUND).map(|_| ())
            }
            SetSpec::FloorTabulated { values } => {
                if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                    return Err(Error::invalid("tabulated values must be positive reals"));
                }
                Ok(())
            }
            SetSpec::PowerSTimesPowerT { a, b, s, t } => {
                check_base("a", *a)?;
                check_base("b", *b)?;
                s.validate()?;
                t.validate()
            }
            SetSpec::FiniteProduct { bases } => {
                if bases.is_empty() {
                    return Err(Error::invalid("bases must be nonempty"));
                }
                for &a in bases {
                    check_base("base", a)?;
                }
                let distinct: BTreeSet<_> = bases.iter().collect();
                if distinct.len() != bases.len() {
                    return Err(Error::invalid("finite product bases must be distinct"));
                }
                Ok(())
            }
            SetSpec::Explicit { elements } => {
                if elements.contains(&0) {
                    return Err(Error::invalid("explicit elements must be positive"));
                }
                Ok(())
            }
        }
    }
}

/// Strictly increasing positive integers, complete up to `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortedSet {
    elements: Vec<u64>,
    bound: u64,
    /// Candidates whose 64-bit computation overflowed; all exceed `bound`.
    #[serde(default)]
    overflowed: u64,
}

impl SortedSet {
    /// Sorts, deduplicates and drops everything above `bound`.
    pub fn from_unsorted(mut elements: Vec<u64>, bound: u64) -> Result<Self> {
        if elements.contains(&0) {
            return Err(Error::invalid("set elements must be positive"));
        }
        elements.retain(|&x| x <= bound);
        elements.sort_unstable();
        elements.dedup();
        Ok(SortedSet {
            elements,
            bound,
            overflowed: 0,
        })
    }

    /// Bound defaults to the largest element.
    pub fn from_elements(elements: Vec<u64>) -> Result<Self> {
        let bound = elements.iter().copied().max().unwrap_or(1);
        Self::from_unsorted(elements, bound)
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn overflowed(&self) -> u64 {
        self.overflowed
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements.iter().copied()
    }

    /// Elements `≤ bound`, with the bound lowered accordingly.
    pub fn truncated(&self, bound: u64) -> SortedSet {
        let end = self.elements.partition_point(|&x| x <= bound);
        SortedSet {
            elements: self.elements[..end].to_vec(),
            bound: bound.min(self.bound),
            overflowed: 0,
        }
    }

    /// Keeps elements satisfying `keep`; the bound is unchanged.
    pub fn filtered(&self, keep: impl Fn(u64) -> bool) -> SortedSet {
        SortedSet {
            elements: self.elements.iter().copied().filter(|&x| keep(x)).collect(),
            bound: self.bound,
            overflowed: 0,
        }
    }

    /// Newline-delimited decimal text, one element per line.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.elements.len() * 8);
        for x in &self.elements {
            s.push_str(&x.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str, bound: Option<u64>) -> Result<Self> {
        let elements = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad element {l:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match bound {
            Some(b) => Self::from_unsorted(elements, b),
            None => Self::from_elements(elements),
        }
    }
}

/// Smallest `r` with `a = r^k`, together with `k`.
pub fn minimal_root(a: u64) -> (u64, u32) {
    if a < 4 {
        return (a, 1);
    }
    for k in (2..=a.ilog2()).rev() {
        let r = integer_root(a, k);
        if r.checked_pow(k) == Some(a) {
            let (rr, kk) = minimal_root(r);
            return (rr, kk * k);
        }
    }
    (a, 1)
}

/// `⌊a^{1/k}⌋`.
fn integer_root(a: u64, k: u32) -> u64 {
    let mut r = (a as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).map_or(true, |v| v > a) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= a) {
        r += 1;
    }
    r
}

/// Accumulates candidates and counts 64-bit overflows.
struct Collector {
    bound: u64,
    out: Vec<u64>,
    overflowed: u64,
}

impl Collector {
    fn new(bound: u64) -> Self {
        Collector {
            bound,
            out: Vec::new(),
            overflowed: 0,
        }
    }

    fn finish(self) -> SortedSet {
        let mut set = SortedSet::from_unsorted(self.out, self.bound).expect("positive candidates");
        set.overflowed = self.overflowed;
        set
    }

    /// `{start · base^k : k ≥ 0} ∩ [1, bound]`.
    fn geometric_run(&mut self, start: u64, base: u64) {
        let mut x = start;
        while x <= self.bound {
            self.out.push(x);
            match x.checked_mul(base) {
                Some(y) => x = y,
                None => {
                    self.overflowed += 1;
                    break;
                }
            }
        }
    }
}

/// Powers `base^e ≤ bound` for each exponent in order; `None` past the bound.
fn checked_power(base: u64, e: u64, bound: u64) -> Option<u64> {
    let e = u32::try_from(e).ok()?;
    base.checked_pow(e).filter(|&v| v <= bound)
}

/// Materializes `{x ∈ family : 1 ≤ x ≤ bound}`.
pub fn enumerate(spec: &SetSpec, bound: u64) -> Result<SortedSet> {
    if bound == 0 {
        return Err(Error::invalid("bound must be >= 1"));
    }
    if bound > MAX_ELEMENT {
        return Err(Error::invalid(format!("bound must be <= {MAX_ELEMENT}")));
    }
    spec.validate()?;
    let mut c = Collector::new(bound);
    match spec {
        SetSpec::GammaAB { a, b } => {
            let mut x = 1u64;
            while x <= bound {
                c.geometric_run(x, *b);
                match x.checked_mul(*a) {
                    Some(y) => x = y,
                    None => {
                        c.overflowed += 1;
                        break;
                    }
                }
            }
        }
        SetSpec::GammaSingle { a } => c.geometric_run(1, *a),
        SetSpec::PowerTimesFinite { a, bs } => {
            for &b in bs {
                c.geometric_run(b, *a);
            }
        }
        SetSpec::PolyPowerProduct { bases, polys } => {
            let mut factors: Vec<(u64, Vec<u64>)> = bases
                .iter()
                .zip(polys)
                .map(|(&a, p)| (a, poly_power_values(a, p, bound)))
                .collect();
            // Largest bases first: their value lists are shortest and prune hardest.
            factors.sort_by(|x, y| y.0.cmp(&x.0));
            let lists: Vec<Vec<u64>> = factors.into_iter().map(|(_, v)| v).collect();
            product_search(&lists, 0, 1, bound, &mut c.out);
        }
        SetSpec::GeometricUnion { bases } => {
            for &a in bases {
                c.geometric_run(1, a);
            }
        }
        SetSpec::FloorPoly { poly } => {
            let root_bound = poly.root_bound();
            let limit = BigInt::from(bound);
            let mut n = 1u64;
            loop {
                let v = poly.floor_at(n);
                if v > limit {
                    if n > root_bound {
                        break;
                    }
                } else if let Some(x) = v.to_u64().filter(|&x| x >= 1) {
                    c.out.push(x);
                }
                n += 1;
            }
        }
        SetSpec::PolyOfPrimes { poly } => {
            let escape = poly.escape_index(bound);
            if escape > MAX_PRIME_SIEVE {
                return Err(Error::invalid(format!(
                    "prime range up to {escape} exceeds the sieve ceiling {MAX_PRIME_SIEVE}"
                )));
            }
            let limit = BigInt::from(bound);
            for p in primes_up_to(escape) {
                let v = poly.eval_u64(p);
                if v <= limit {
                    if let Some(x) = v.to_u64().filter(|&x| x >= 1) {
                        c.out.push(x);
                    }
                }
            }
        }
        SetSpec::FloorTabulated { values } => {
            for v in values {
                let f = v.floor();
                if f >= 1.0 && f <= bound as f64 {
                    c.out.push(f as u64);
                }
            }
        }
        SetSpec::PowerSTimesPowerT { a, b, s, t } => {
            let s_exps = s.materialize(ilog_floor(*a, bound) as u64)?;
            let t_exps = t.materialize(ilog_floor(*b, bound) as u64)?;
            for &i in &s_exps {
                let Some(x) = checked_power(*a, i, bound) else {
                    continue;
                };
                for &j in &t_exps {
                    match checked_power(*b, j, bound).and_then(|y| x.checked_mul(y)) {
                        Some(v) if v <= bound => c.out.push(v),
                        Some(_) => {}
                        None => c.overflowed += 1,
                    }
                }
            }
        }
        SetSpec::FiniteProduct { bases } => {
            return finite_products(bases, bound);
        }
        SetSpec::Explicit { elements } => {
            c.out.extend(elements.iter().copied().filter(|&x| x <= bound));
        }
    }
    Ok(c.finish())
}

/// Distinct values `a^{P(n)} ≤ bound`, ascending.
fn poly_power_values(a: u64, p: &IntPoly, bound: u64) -> Vec<u64> {
    let max_exp = ilog_floor(a, bound) as u64;
    let escape = p.escape_index(max_exp);
    let mut vals = BTreeSet::new();
    for n in 0..escape {
        if let Some(e) = p.eval_u64(n).to_u64() {
            if let Some(v) = checked_power(a, e, bound) {
                vals.insert(v);
            }
        }
    }
    vals.into_iter().collect()
}

fn product_search(lists: &[Vec<u64>], depth: usize, acc: u64, bound: u64, out: &mut Vec<u64>) {
    if depth == lists.len() {
        out.push(acc);
        return;
    }
    for &v in &lists[depth] {
        match acc.checked_mul(v) {
            Some(x) if x <= bound => product_search(lists, depth + 1, x, bound, out),
            _ => break,
        }
    }
}

/// `FP(S) ∩ [1, bound]`: products of nonempty sets of distinct elements.
pub fn finite_products(bases: &[u64], bound: u64) -> Result<SortedSet> {
    if bound == 0 {
        return Err(Error::invalid("bound must be >= 1"));
    }
    if bases.is_empty() {
        return Err(Error::invalid("S must be nonempty"));
    }
    let mut sorted = bases.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("S must not contain duplicates"));
    }
    if sorted[0] < 2 {
        return Err(Error::invalid("elements of S must be >= 2"));
    }
    fn walk(s: &[u64], start: usize, acc: u64, bound: u64, out: &mut Vec<u64>) {
        for i in start..s.len() {
            match acc.checked_mul(s[i]) {
                Some(x) if x <= bound => {
                    out.push(x);
                    walk(s, i + 1, x, bound, out);
                }
                // Sorted ascending: every later factor overshoots too.
                _ => break,
            }
        }
    }
    let mut out = Vec::new();
    walk(&sorted, 0, 1, bound, &mut out);
    SortedSet::from_unsorted(out, bound)
}

/// `Δᵏf`, where `Δf(n) = f(n+1) − f(n)`. Output has `len − k` entries.
pub fn kth_difference(f: &[i64], k: usize) -> Result<Vec<i64>> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    if k >= f.len() {
        return Err(Error::invalid(format!(
            "table of length {} has no {k}th difference",
            f.len()
        )));
    }
    let mut cur = f.to_vec();
    for _ in 0..k {
        cur = cur
            .windows(2)
            .map(|w| {
                w[1].checked_sub(w[0])
                    .ok_or_else(|| Error::invalid("difference overflows 64 bits"))
            })
            .collect::<Result<_>>()?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma(a: u64, b: u64, n: u64) -> Vec<u64> {
        enumerate(&SetSpec::GammaAB { a, b }, n).unwrap().elements
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(2, 3, 20), vec![1, 2, 3, 4, 6, 8, 9, 12, 16, 18]);
        let g3 = enumerate(&SetSpec::GammaSingle { a: 3 }, 30).unwrap();
        assert_eq!(g3.elements(), &[1, 3, 9, 27]);
        assert_eq!(gamma(2, 3, 100).len(), 20);
    }

    #[test]
    fn gamma_matches_double_loop() {
        for (a, b) in [(2, 3), (3, 5), (2, 4), (6, 10)] {
            let mut naive = BTreeSet::new();
            for n in 0..40u32 {
                for m in 0..40u32 {
                    if let Some(x) = (a as u128)
                        .checked_pow(n)
                        .and_then(|x| x.checked_mul((b as u128).checked_pow(m)?))
                    {
                        if x <= 100_000 {
                            naive.insert(x as u64);
                        }
                    }
                }
            }
            assert_eq!(gamma(a, b, 100_000), naive.into_iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn squares_of_primes() {
        let spec = SetSpec::PolyOfPrimes {
            poly: IntPoly::monomial(2),
        };
        assert_eq!(enumerate(&spec, 100).unwrap().elements(), &[4, 9, 25, 49]);
    }

    #[test]
    fn finite_product_examples() {
        assert_eq!(
            finite_products(&[2, 3, 5], 40).unwrap().elements(),
            &[2, 3, 5, 6, 10, 15, 30]
        );
        assert_eq!(finite_products(&[7], 100).unwrap().elements(), &[7]);
        assert_eq!(finite_products(&[2, 3], 5).unwrap().elements(), &[2, 3]);
        assert!(finite_products(&[2, 2], 5).is_err());
    }

    #[test]
    fn kth_difference_examples() {
        let sq: Vec<i64> = (1..=6).map(|n| n * n).collect();
        assert_eq!(kth_difference(&sq, 2).unwrap(), vec![2; 4]);
        let lin: Vec<i64> = (1..=5).collect();
        assert_eq!(kth_difference(&lin, 1).unwrap(), vec![1; 4]);
        let f: Vec<i64> = (1..=100).map(|n| (n as f64).powf(1.5).floor() as i64).collect();
        let d2 = kth_difference(&f, 2).unwrap();
        assert_eq!(d2.len(), 98);
        assert!(d2.iter().all(|&v| (-2..=2).contains(&v)));
        assert!(kth_difference(&lin, 5).is_err());
    }

    #[test]
    fn validation_errors() {
        assert!(enumerate(&SetSpec::GammaAB { a: 1, b: 3 }, 10).is_err());
        assert!(enumerate(&SetSpec::GammaSingle { a: 2 }, 0).is_err());
        assert!(enumerate(&SetSpec::Explicit { elements: vec![0, 3] }, 10).is_err());
        let bad = SetSpec::PolyPowerProduct {
            bases: vec![2],
            polys: vec![IntPoly::new(vec![1, 1]).unwrap()],
        };
        assert!(enumerate(&bad, 10).is_err());
        let twins = SetSpec::GeometricUnion { bases: vec![4, 8] };
        assert!(enumerate(&twins, 10).is_err());
        let ok = SetSpec::GeometricUnion { bases: vec![4, 6] };
        assert!(enumerate(&ok, 10).is_ok());
    }

    #[test]
    fn minimal_roots() {
        assert_eq!(minimal_root(64), (2, 6));
        assert_eq!(minimal_root(81), (3, 4));
        assert_eq!(minimal_root(12), (12, 1));
        assert_eq!(minimal_root(2), (2, 1));
        assert_eq!(minimal_root(1 << 62), (2, 62));
    }

    #[test]
    fn poly_power_product_matches_nested_loops() {
        // {2^{n²} 3^{m²}} up to 10^6 has 17 elements.
        let spec = SetSpec::PolyPowerProduct {
            bases: vec![2, 3],
            polys: vec![IntPoly::monomial(2), IntPoly::monomial(2)],
        };
        let set = enumerate(&spec, 1_000_000).unwrap();
        let mut naive = BTreeSet::new();
        for n in 0..5u32 {
            for m in 0..4u32 {
                let x = 2u64.pow(n * n) * 3u64.pow(m * m);
                if x <= 1_000_000 {
                    naive.insert(x);
                }
            }
        }
        assert_eq!(set.elements(), naive.into_iter().collect::<Vec<_>>().as_slice());
        assert_eq!(set.len(), 17);
    }

    #[test]
    fn gamma_equals_power_times_finite_merge() {
        let bound = 1_000_000;
        let bs: Vec<u64> = (0..).map(|m| 3u64.pow(m)).take_while(|&x| x <= bound).collect();
        let a = enumerate(&SetSpec::GammaAB { a: 2, b: 3 }, bound).unwrap();
        let b = enumerate(&SetSpec::PowerTimesFinite { a: 2, bs }, bound).unwrap();
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn integer_floor_poly_is_direct_evaluation() {
        let spec = SetSpec::FloorPoly {
            poly: RealPoly::new(vec![1.0, 0.0, 2.0]).unwrap(),
        };
        let set = enumerate(&spec, 500).unwrap();
        let direct: Vec<u64> = (1..).map(|n| 2 * n * n + 1).take_while(|&x| x <= 500).collect();
        assert_eq!(set.elements(), direct.as_slice());
    }

    #[test]
    fn power_s_times_power_t() {
        let spec = SetSpec::PowerSTimesPowerT {
            a: 2,
            b: 3,
            s: ExponentSet::Progression { start: 3, step: 3 },
            t: ExponentSet::List(vec![0, 1]),
        };
        let set = enumerate(&spec, 1000).unwrap();
        assert_eq!(set.elements(), &[8, 24, 64, 192, 512]);
    }

    #[test]
    fn overflow_is_counted_not_wrapped() {
        // 5^27 fits below 2^63 - 1; 5^28 overflows u64 entirely.
        let set = enumerate(&SetSpec::GammaSingle { a: 5 }, MAX_ELEMENT).unwrap();
        assert_eq!(set.len(), 28);
        assert!(set.overflowed() >= 1);
        assert!(set.iter().all(|x| x <= MAX_ELEMENT));
    }

    #[test]
    fn text_round_trip() {
        let set = enumerate(&SetSpec::GammaAB { a: 2, b: 5 }, 1000).unwrap();
        let back = SortedSet::from_text(&set.to_text(), Some(1000)).unwrap();
        assert_eq!(back, set);
    }
}
