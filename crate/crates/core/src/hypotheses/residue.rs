use std::collections::HashMap;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fs::residue_fs;
use crate::sets::SortedSet;

/// How one descent step `q_i → q_{i+1}` was certified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum StepMethod {
    /// Enough elements with `gcd(n, q_i) = q_{i+1}`.
    Count { witnesses: Vec<u64> },
    /// Exact residue DP on `C ∩ q_{i+1}ℕ` modulo `q_i`.
    Dp { with_empty: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentStep {
    pub from: u64,
    pub to: u64,
    #[serde(flatten)]
    pub method: StepMethod,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueRecord {
    pub q: u64,
    /// `FS(C) + qℤ = ℤ`, certified by `path`.
    pub full: bool,
    /// Chain `q = q_0 > q_1 > … > 1`; `None` when no chain exists.
    pub path: Option<Vec<DescentStep>>,
    /// `#{n ∈ C : q ∤ n} > Σ_{r | q, r < q} (q/r − 2)`.
    pub pigeonhole: bool,
    /// Direct DP of `FS(C)` modulo `q`, as a cross-check of `full`.
    pub dp_full: bool,
}

fn divisors_below(d: u64) -> Vec<u64> {
    (1..d).filter(|r| d % r == 0).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pass {
    Count,
    Dp,
}

struct Descent<'a> {
    c: &'a [u64],
    /// Chains for later steps depend only on the starting modulus.
    memo: HashMap<u64, Option<Vec<DescentStep>>>,
}

impl Descent<'_> {
    /// Certifies `FS(C ∩ rℕ) + dℤ = rℤ`. The first step needs nonempty sums for
    /// every residue (0 included); later steps may use the empty sum, since the
    /// first step already contributes a nonempty part.
    fn edge(&self, d: u64, r: u64, first: bool, pass: Pass) -> Result<Option<StepMethod>> {
        match pass {
            Pass::Count => {
                let need = (d / r - if first { 0 } else { 1 }) as usize;
                let witnesses: Vec<u64> = self
                    .c
                    .iter()
                    .copied()
                    .filter(|n| n.gcd(&d) == r)
                    .take(need)
                    .collect();
                Ok((witnesses.len() == need).then_some(StepMethod::Count { witnesses }))
            }
            Pass::Dp => {
                let sub = self.c.iter().filter(|&&n| n % r == 0).map(|&n| (n / r) % (d / r));
                let cov = residue_fs(sub, d / r)?;
                let ok = if first { cov.full } else { cov.full_with_empty };
                Ok(ok.then_some(StepMethod::Dp { with_empty: !first }))
            }
        }
    }

    fn chain(&mut self, d: u64, first: bool) -> Result<Option<Vec<DescentStep>>> {
        if d == 1 {
            return Ok(Some(Vec::new()));
        }
        if !first {
            if let Some(hit) = self.memo.get(&d) {
                return Ok(hit.clone());
            }
        }
        let mut found = None;
        'search: for pass in [Pass::Count, Pass::Dp] {
            for r in divisors_below(d) {
                if let Some(method) = self.edge(d, r, first, pass)? {
                    if let Some(rest) = self.chain(r, false)? {
                        let mut steps = vec![DescentStep { from: d, to: r, method }];
                        steps.extend(rest);
                        found = Some(steps);
                        break 'search;
                    }
                }
            }
        }
        if !first {
            self.memo.insert(d, found.clone());
        }
        Ok(found)
    }
}

/// Descent certificates for every `q = 2..=qmax`.
pub fn residue_conditions(c: &SortedSet, qmax: u64) -> Result<Vec<ResidueRecord>> {
    if qmax < 2 {
        return Err(Error::invalid("qmax must be >= 2"));
    }
    let mut descent = Descent {
        c: c.elements(),
        memo: HashMap::new(),
    };
    let mut out = Vec::new();
    for q in 2..=qmax {
        let path = descent.chain(q, true)?;
        let nondivisible = c.iter().filter(|n| n % q != 0).count() as u64;
        let slack: u64 = divisors_below(q).iter().map(|r| q / r - 2).sum();
        out.push(ResidueRecord {
            q,
            full: path.is_some(),
            path,
            pigeonhole: nondivisible > slack,
            dp_full: residue_fs(c.iter(), q)?.full,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{enumerate, SetSpec};
    use proptest::prelude::*;

    fn set(v: Vec<u64>) -> SortedSet {
        let b = v.iter().copied().max().unwrap_or(1);
        SortedSet::from_unsorted(v, b).unwrap()
    }

    fn brute_full(c: &[u64], q: u64) -> bool {
        let mut seen = vec![false; q as usize];
        for mask in 1u32..(1 << c.len()) {
            let s: u64 = (0..c.len()).filter(|i| mask >> i & 1 == 1).map(|i| c[i]).sum();
            seen[(s % q) as usize] = true;
        }
        seen.iter().all(|&b| b)
    }

    #[test]
    fn gamma_two_three_mod_six_descends_by_counting() {
        let g = enumerate(&SetSpec::GammaAB { a: 2, b: 3 }, 1_000_000).unwrap();
        let rec = &residue_conditions(&g, 6).unwrap()[4];
        assert_eq!(rec.q, 6);
        assert!(rec.full && rec.dp_full);
        let path = rec.path.as_ref().unwrap();
        assert_eq!(path.last().unwrap().to, 1);
        assert!(path.iter().all(|s| matches!(s.method, StepMethod::Count { .. })));
        // 6 → 2 by {2, 4, 8}, then 2 → 1 by the odd element 1.
        assert_eq!(path[0].to, 2);
        assert_eq!(path[0].method, StepMethod::Count { witnesses: vec![2, 4, 8] });
        assert_eq!(path[1].method, StepMethod::Count { witnesses: vec![1] });
    }

    #[test]
    fn even_numbers_fail_mod_two() {
        let rec = &residue_conditions(&set((1..=100).map(|k| 2 * k).collect()), 2).unwrap()[0];
        assert!(!rec.full && !rec.dp_full && rec.path.is_none());
        assert!(!rec.pigeonhole);
    }

    #[test]
    fn multiples_of_six_ten_fifteen_descend_mod_thirty() {
        let c = set((1..=1000).filter(|n| n % 6 == 0 || n % 10 == 0 || n % 15 == 0).collect());
        let rec = residue_conditions(&c, 30).unwrap().pop().unwrap();
        assert!(rec.full && rec.dp_full);
        let chain: Vec<u64> = std::iter::once(30)
            .chain(rec.path.unwrap().iter().map(|s| s.to))
            .collect();
        assert!(chain.len() > 2, "expected a multi-step descent, got {chain:?}");
        assert!(chain.windows(2).all(|w| w[0] % w[1] == 0 && w[1] < w[0]));
        // The three generators alone reach only 7 residues; the descent needs the multiples.
        assert!(!brute_full(&[6, 10, 15], 30));
    }

    #[test]
    fn pigeonhole_flag_matches_the_count() {
        // q = 4: divisors 1, 2 give slack (4 − 2) + (2 − 2) = 2.
        let rec = &residue_conditions(&set(vec![1, 3, 5]), 4).unwrap()[2];
        assert_eq!(rec.q, 4);
        assert!(rec.pigeonhole);
        let rec = &residue_conditions(&set(vec![1, 3, 8]), 4).unwrap()[2];
        assert!(!rec.pigeonhole);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn agrees_with_subset_enumeration(v in proptest::collection::btree_set(1u64..200, 1..=15)) {
            let c: Vec<u64> = v.into_iter().collect();
            let recs = residue_conditions(&set(c.clone()), 30).unwrap();
            for r in recs {
                let brute = brute_full(&c, r.q);
                prop_assert_eq!(r.full, brute, "q = {}", r.q);
                prop_assert_eq!(r.dp_full, brute);
                if let Some(path) = &r.path {
                    prop_assert_eq!(path[0].from, r.q);
                    prop_assert_eq!(path.last().unwrap().to, 1);
                }
            }
        }

        #[test]
        fn counting_criterion_implies_dp(v in proptest::collection::vec(1u64..500, 1..=15), q in 2u64..=30) {
            let c = set(v.iter().copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect());
            for r in divisors_below(q) {
                let count = c.iter().filter(|n| n.gcd(&q) == r).count() as u64;
                if count >= q / r - 1 {
                    let sub = c.iter().filter(|n| n % r == 0).map(|n| n / r);
                    prop_assert!(residue_fs(sub, q / r).unwrap().full_with_empty);
                }
            }
        }
    }
}
