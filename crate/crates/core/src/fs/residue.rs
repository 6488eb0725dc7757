use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Residues mod `q` reached by nonempty sums of distinct elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCoverage {
    pub q: u64,
    /// Sorted residues of `FS(C)`; the empty sum is not included.
    pub reached: Vec<u64>,
    /// Every residue, including `0`, is a nonempty sum.
    pub full: bool,
    /// Every residue is reached once the empty sum is admitted, i.e. all
    /// nonzero residues are reached.
    pub full_with_empty: bool,
}

impl ResidueCoverage {
    pub fn contains(&self, r: u64) -> bool {
        self.reached.binary_search(&(r % self.q)).is_ok()
    }
}

/// Exact DP over `C` in `ℤ/qℤ`.
///
/// At most `q` elements of each residue class can matter, since `k` copies of
/// a class `c` only contribute `k·c`; later copies are skipped.
pub fn residue_fs(c: impl IntoIterator<Item = u64>, q: u64) -> Result<ResidueCoverage> {
    if q < 2 {
        return Err(Error::invalid("modulus must be >= 2"));
    }
    let qs = usize::try_from(q).map_err(|_| Error::invalid("modulus too large"))?;
    let mut reached = vec![false; qs];
    let mut count = 0usize;
    let mut seen_per_class = vec![0u64; qs];
    let mut next = vec![false; qs];
    for x in c {
        let r = (x % q) as usize;
        if seen_per_class[r] >= q {
            continue;
        }
        seen_per_class[r] += 1;
        next.copy_from_slice(&reached);
        next[r] = true;
        for (v, &hit) in reached.iter().enumerate() {
            if hit {
                next[(v + r) % qs] = true;
            }
        }
        std::mem::swap(&mut reached, &mut next);
        count = reached.iter().filter(|&&b| b).count();
        if count == qs {
            break;
        }
    }
    let full = count == qs;
    let full_with_empty = full || (count == qs - 1 && !reached[0]);
    Ok(ResidueCoverage {
        q,
        reached: (0..q).filter(|&v| reached[v as usize]).collect(),
        full,
        full_with_empty,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let r = residue_fs([1], 2).unwrap();
        assert_eq!(r.reached, vec![1]);
        assert!(!r.full);
        assert!(r.full_with_empty);
        let r = residue_fs([1, 2], 3).unwrap();
        assert_eq!(r.reached, vec![0, 1, 2]);
        assert!(r.full);
        let r = residue_fs([2, 4, 6], 2).unwrap();
        assert_eq!(r.reached, vec![0]);
        assert!(!r.full && !r.full_with_empty);
        assert!(residue_fs([1], 1).is_err());
    }

    #[test]
    fn repeated_class_saturates() {
        // Many copies of 1 mod 5 reach everything.
        let r = residue_fs((0..100).map(|k| 1 + 5 * k), 5).unwrap();
        assert!(r.full);
    }

    proptest! {
        #[test]
        fn matches_subset_enumeration(v in proptest::collection::vec(1u64..10_000, 0..15), q in 2u64..31) {
            let mut expected = std::collections::BTreeSet::new();
            for mask in 1u32..(1 << v.len()) {
                let s: u64 = (0..v.len()).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).sum();
                expected.insert(s % q);
            }
            let r = residue_fs(v.iter().copied(), q).unwrap();
            prop_assert_eq!(r.reached.clone(), expected.into_iter().collect::<Vec<_>>());
            prop_assert_eq!(r.full, r.reached.len() as u64 == q);
        }
    }
}
