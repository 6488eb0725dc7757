use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::sets::SortedSet;

/// Default memory cap for coverage bitsets, in bits (256 MiB).
pub const DEFAULT_MAX_BITS: u64 = 1 << 31;

const DUMP_MAGIC: &[u8; 4] = b"FSBS";
const DUMP_VERSION: u32 = 1;

/// Bit vector over `[1, N]`: bit `n` is set iff `n` is a sum of distinct elements.
///
/// Stored little-endian by word, bit `n − 1` of the stream standing for `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumCoverage {
    words: Vec<u64>,
    bound: u64,
    source_count: usize,
}

fn words_for(bound: u64) -> usize {
    bound.div_ceil(64) as usize
}

fn tail_mask(bound: u64) -> u64 {
    match bound % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// Bytes needed for a coverage vector over `[1, bound]`.
pub fn required_bytes(bound: u64) -> u64 {
    bound.div_ceil(64) * 8
}

/// Coverage of `FS(A ∩ [1, bound])` under the default memory cap.
pub fn fs_coverage(set: &SortedSet, bound: u64) -> Result<SumCoverage> {
    fs_coverage_capped(set, bound, DEFAULT_MAX_BITS)
}

/// Coverage with an explicit cap on the bitset size, in bits.
///
/// Elements are consumed in increasing order; for each element `e` the vector
/// is OR-ed with itself shifted up by `e`, then bit `e` is set. Bit `n` is
/// final once the first element larger than `n` has been reached, so the
/// result is exact on all of `[1, bound]`.
pub fn fs_coverage_capped(set: &SortedSet, bound: u64, max_bits: u64) -> Result<SumCoverage> {
    if bound == 0 {
        return Err(Error::invalid("coverage bound must be >= 1"));
    }
    if bound > max_bits {
        return Err(Error::Resource {
            required_bytes: required_bytes(bound),
            cap_bytes: max_bits / 8,
        });
    }
    let mut words = vec![0u64; words_for(bound)];
    // Largest reachable sum so far, clipped to the bound.
    let mut reach: u64 = 0;
    let mut consumed = 0;
    for e in set.iter().take_while(|&e| e <= bound) {
        let new_reach = reach.saturating_add(e).min(bound);
        if reach > 0 {
            shift_or(&mut words, e, new_reach);
        }
        let bit = (e - 1) as usize;
        words[bit / 64] |= 1 << (bit % 64);
        reach = new_reach;
        consumed += 1;
    }
    if let Some(last) = words.last_mut() {
        *last &= tail_mask(bound);
    }
    Ok(SumCoverage {
        words,
        bound,
        source_count: consumed,
    })
}

/// `bits |= bits << shift`, touching only words that can receive a bit `≤ top`.
fn shift_or(words: &mut [u64], shift: u64, top: u64) {
    let ws = (shift / 64) as usize;
    let bs = (shift % 64) as u32;
    let top_word = ((top - 1) / 64) as usize;
    // Descending so every source word is read before it is overwritten.
    for w in (ws..=top_word).rev() {
        let hi = words[w - ws];
        let mut v = hi << bs;
        if bs != 0 && w > ws {
            v |= words[w - ws - 1] >> (64 - bs);
        }
        words[w] |= v;
    }
}

impl SumCoverage {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Number of elements of the source set that were `≤ bound`.
    pub fn source_count(&self) -> usize {
        self.source_count
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// False outside `[1, bound]`.
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 || n > self.bound {
            return false;
        }
        let bit = (n - 1) as usize;
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Covered integers in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = i as u64 * 64;
            BitIter(w).map(move |b| base + b as u64 + 1)
        })
    }

    /// Uncovered integers in `[1, bound]`, in decreasing order.
    pub fn iter_missing_desc(&self) -> impl Iterator<Item = u64> + '_ {
        let bound = self.bound;
        let last = self.words.len().saturating_sub(1);
        self.words.iter().enumerate().rev().flat_map(move |(i, &w)| {
            let mut missing = !w;
            if i == last {
                missing &= tail_mask(bound);
            }
            let base = i as u64 * 64;
            BitIterRev(missing).map(move |b| base + b as u64 + 1)
        })
    }

    /// Coverage restricted to `[1, m]`.
    pub fn prefix(&self, m: u64) -> SumCoverage {
        let m = m.min(self.bound).max(1);
        let mut words = self.words[..words_for(m)].to_vec();
        *words.last_mut().unwrap() &= tail_mask(m);
        SumCoverage {
            words,
            bound: m,
            source_count: self.source_count,
        }
    }

    /// Binary dump: magic, version, bound, then the words, all little-endian.
    pub fn write_dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(DUMP_MAGIC)?;
        out.write_all(&DUMP_VERSION.to_le_bytes())?;
        out.write_all(&self.bound.to_le_bytes())?;
        for w in &self.words {
            out.write_all(&w.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn to_dump_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(16 + self.words.len() * 8);
        self.write_dump(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    /// Parses a dump; `source_count` is not stored and reads back as zero.
    pub fn read_dump<R: Read>(mut input: R) -> Result<SumCoverage> {
        let io = |e: std::io::Error| Error::Parse(format!("bitset dump: {e}"));
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic).map_err(io)?;
        if &magic != DUMP_MAGIC {
            return Err(Error::Parse("bitset dump: bad magic".into()));
        }
        let mut b4 = [0u8; 4];
        input.read_exact(&mut b4).map_err(io)?;
        let version = u32::from_le_bytes(b4);
        if version != DUMP_VERSION {
            return Err(Error::Parse(format!(
                "bitset dump: unsupported version {version}"
            )));
        }
        let mut b8 = [0u8; 8];
        input.read_exact(&mut b8).map_err(io)?;
        let bound = u64::from_le_bytes(b8);
        if bound == 0 {
            return Err(Error::Parse("bitset dump: zero bound".into()));
        }
        let mut words = Vec::with_capacity(words_for(bound));
        for _ in 0..words_for(bound) {
            input.read_exact(&mut b8).map_err(io)?;
            words.push(u64::from_le_bytes(b8));
        }
        if words.last().is_some_and(|&w| w & !tail_mask(bound) != 0) {
            return Err(Error::Parse("bitset dump: bits set beyond bound".into()));
        }
        Ok(SumCoverage {
            words,
            bound,
            source_count: 0,
        })
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

struct BitIterRev(u64);

impl Iterator for BitIterRev {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = 63 - self.0.leading_zeros();
        self.0 &= !(1 << b);
        Some(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn brute_force(elements: &[u64], bound: u64) -> BTreeSet<u64> {
        let mut sums = BTreeSet::new();
        for mask in 1u32..(1 << elements.len()) {
            let s: u64 = (0..elements.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| elements[i])
                .sum();
            if s <= bound {
                sums.insert(s);
            }
        }
        sums
    }

    fn set(v: &[u64]) -> SortedSet {
        SortedSet::from_elements(v.to_vec()).unwrap()
    }

    #[test]
    fn powers_of_two_cover_everything() {
        let a = set(&[1, 2, 4, 8, 16, 32, 64]);
        let c = fs_coverage(&a, 100).unwrap();
        assert_eq!(c.count(), 100);
    }

    #[test]
    fn powers_of_three_example() {
        let c = fs_coverage(&set(&[3, 9, 27]), 40).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![3, 9, 12, 27, 30, 36, 39]);
    }

    #[test]
    fn base_three_digits_miss_two() {
        let g3: Vec<u64> = (0..9).map(|k| 3u64.pow(k)).collect();
        let c = fs_coverage(&set(&g3), 10_000).unwrap();
        assert!(!c.contains(2));
        assert!(c.contains(1) && c.contains(3) && c.contains(4));
    }

    #[test]
    fn word_boundaries_and_large_shifts() {
        let a = set(&[63, 64, 65, 127, 128, 200]);
        let c = fs_coverage(&a, 700).unwrap();
        let expected = brute_force(a.elements(), 700);
        assert_eq!(c.iter().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn memory_cap_refuses() {
        let err = fs_coverage_capped(&set(&[1]), 1 << 20, 1 << 10).unwrap_err();
        assert_eq!(
            err,
            Error::Resource {
                required_bytes: (1 << 20) / 8,
                cap_bytes: (1 << 10) / 8
            }
        );
    }

    #[test]
    fn dump_layout_is_exact() {
        let c = fs_coverage(&set(&[1, 3]), 70).unwrap();
        let bytes = c.to_dump_bytes();
        assert_eq!(&bytes[..4], b"FSBS");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(&bytes[8..16], &70u64.to_le_bytes());
        assert_eq!(bytes.len(), 16 + 2 * 8);
        // {1, 3, 4} -> bits 0, 2, 3.
        assert_eq!(&bytes[16..24], &0b1101u64.to_le_bytes());
        let back = SumCoverage::read_dump(bytes.as_slice()).unwrap();
        assert_eq!(back.words(), c.words());
        assert!(SumCoverage::read_dump(&b"FSBX\x01\0\0\0"[..]).is_err());
    }

    #[test]
    fn missing_iterator_descends() {
        let c = fs_coverage(&set(&[3, 9, 27]), 40).unwrap();
        let missing: Vec<u64> = c.iter_missing_desc().take(4).collect();
        assert_eq!(missing, vec![40, 38, 37, 35]);
        assert_eq!(c.iter_missing_desc().count() as u64, 40 - c.count());
    }

    proptest! {
        #[test]
        fn matches_subset_enumeration(v in proptest::collection::btree_set(1u64..300, 0..12), bound in 1u64..2000) {
            let elems: Vec<u64> = v.into_iter().collect();
            let a = SortedSet::from_unsorted(elems.clone(), 300).unwrap();
            let c = fs_coverage(&a, bound).unwrap();
            let expected = brute_force(&elems, bound);
            prop_assert_eq!(c.iter().collect::<BTreeSet<_>>(), expected);
        }

        #[test]
        fn prefix_stability(v in proptest::collection::btree_set(1u64..500, 1..15), m in 1u64..1500) {
            let a = SortedSet::from_unsorted(v.into_iter().collect(), 500).unwrap();
            let big = fs_coverage(&a, 1500).unwrap();
            let small = fs_coverage(&a, m).unwrap();
            let pre = big.prefix(m);
            prop_assert_eq!(pre.words(), small.words());
        }
    }
}
