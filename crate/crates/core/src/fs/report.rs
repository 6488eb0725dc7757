use serde::{Deserialize, Serialize};

use super::coverage::SumCoverage;
use crate::error::{Error, Result};
use crate::sets::SortedSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverageVerdict {
    /// A threshold exists and lies in the lower half of the range.
    EmpiricallyComplete,
    /// No usable threshold, but every uncovered run is at most `⌊√N⌋` long.
    SyndeticOnly,
    Sparse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub bound: u64,
    /// Smallest `t` with `[t, N]` fully covered.
    pub threshold: Option<u64>,
    pub missing_count: u64,
    /// Longest run of uncovered integers.
    pub max_gap: u64,
    pub verdict: CoverageVerdict,
}

pub fn coverage_report(c: &SumCoverage) -> CoverageReport {
    let n = c.bound();
    let mut missing_count = 0u64;
    let mut max_gap = 0u64;
    let mut largest_missing = None;
    let mut run = 0u64;
    let mut prev: Option<u64> = None;
    for m in c.iter_missing_desc() {
        missing_count += 1;
        if largest_missing.is_none() {
            largest_missing = Some(m);
        }
        run = if prev == Some(m + 1) { run + 1 } else { 1 };
        max_gap = max_gap.max(run);
        prev = Some(m);
    }
    let threshold = match largest_missing {
        None => Some(1),
        Some(m) if m < n => Some(m + 1),
        Some(_) => None,
    };
    let verdict = match threshold {
        Some(t) if t <= n / 2 => CoverageVerdict::EmpiricallyComplete,
        _ if max_gap <= n.isqrt() => CoverageVerdict::SyndeticOnly,
        _ => CoverageVerdict::Sparse,
    };
    CoverageReport {
        bound: n,
        threshold,
        missing_count,
        max_gap,
        verdict,
    }
}

/// Smallest `s` such that every window of `s + 1` consecutive integers in
/// `[1, bound]` meets the set.
pub fn syndeticity_constant(s: &SortedSet) -> Result<u64> {
    let first = s
        .min()
        .ok_or_else(|| Error::invalid("syndeticity of an empty set"))?;
    let mut worst = first - 1;
    for w in s.elements().windows(2) {
        worst = worst.max(w[1] - w[0] - 1);
    }
    let last = s.max().unwrap();
    Ok(worst.max(s.bound().saturating_sub(last)))
}

/// Residue class `i (mod q)` that is fully covered from `onset` up to the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApHit {
    pub modulus: u64,
    pub residue: u64,
    pub onset: u64,
}

/// Every `(q, i)` with `q ≤ qmax` whose tail `{n ≡ i : onset ≤ n ≤ N}` is
/// covered, with the onset minimal. Classes with no member in range are skipped.
pub fn ap_detect(c: &SumCoverage, qmax: u64) -> Vec<ApHit> {
    let n = c.bound();
    let qmax = qmax.min(n);
    if qmax == 0 {
        return Vec::new();
    }
    // last_missing[q][i]: largest uncovered integer ≡ i (mod q), 0 if none.
    let mut last_missing: Vec<Vec<u64>> = (1..=qmax).map(|q| vec![0; q as usize]).collect();
    let mut unresolved: Vec<u64> = (1..=qmax).collect();
    let mut open_moduli = qmax as usize;
    for m in c.iter_missing_desc() {
        for q in 1..=qmax {
            let qi = (q - 1) as usize;
            if unresolved[qi] == 0 {
                continue;
            }
            let slot = &mut last_missing[qi][(m % q) as usize];
            if *slot == 0 {
                *slot = m;
                unresolved[qi] -= 1;
                if unresolved[qi] == 0 {
                    open_moduli -= 1;
                }
            }
        }
        if open_moduli == 0 {
            break;
        }
    }
    let mut hits = Vec::new();
    for q in 1..=qmax {
        for i in 0..q {
            let onset = match last_missing[(q - 1) as usize][i as usize] {
                0 if i == 0 => q,
                0 => i,
                m => m + q,
            };
            if onset <= n {
                hits.push(ApHit {
                    modulus: q,
                    residue: i,
                    onset,
                });
            }
        }
    }
    hits
}
