use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sets::SortedSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Bounded,
    Growing,
}

/// `sup_{n∈B} (n − Σ{m ∈ B : m < n})` over the prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition1 {
    pub sup: i128,
    /// Element attaining the sup (first occurrence).
    pub witness: u64,
    /// Max over the first three quarters of the elements.
    pub head_max: i128,
    /// Max over the last quarter; `None` when the prefix is too short to split.
    pub tail_max: Option<i128>,
    /// Growing iff `tail_max > 2 · head_max`.
    pub trend: Trend,
}

pub fn condition1_sup(b: &SortedSet) -> Result<Condition1> {
    if b.is_empty() {
        return Err(Error::invalid("condition (I) needs a nonempty set"));
    }
    let mut below: i128 = 0;
    let d: Vec<i128> = b
        .iter()
        .map(|n| {
            let v = n as i128 - below;
            below += n as i128;
            v
        })
        .collect();
    let (mut sup, mut at) = (d[0], 0);
    for (i, &v) in d.iter().enumerate() {
        if v > sup {
            sup = v;
            at = i;
        }
    }
    let split = (3 * d.len() / 4).max(1);
    let head_max = *d[..split].iter().max().unwrap();
    let tail_max = d[split..].iter().max().copied();
    let trend = match tail_max {
        Some(t) if t > 2 * head_max => Trend::Growing,
        _ => Trend::Bounded,
    };
    Ok(Condition1 {
        sup,
        witness: b.elements()[at],
        head_max,
        tail_max,
        trend,
    })
}

/// Minimum of `#(B ∩ (N, (L+1)N])` over windows that fit inside the bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowCount {
    pub l: u64,
    pub min_count: u64,
    pub argmin: u64,
    /// Minimum over `N ≥ √(bound/(L+1))`, the range that approximates the liminf.
    pub tail_min: Option<u64>,
    pub windows: u64,
}

fn count_in(b: &[u64], lo: u64, hi: u64) -> u64 {
    let start = b.partition_point(|&x| x <= lo);
    let end = b.partition_point(|&x| x <= hi);
    (end - start) as u64
}

pub fn window_count(b: &SortedSet, l: u64) -> Result<WindowCount> {
    if l == 0 {
        return Err(Error::invalid("L must be >= 1"));
    }
    let top = b.bound() / (l + 1);
    if top == 0 {
        return Err(Error::invalid("bound too small for a single window"));
    }
    // The count only drops when N passes an element, so N ∈ {1} ∪ B covers every minimum.
    let mut candidates: Vec<u64> = vec![1];
    for x in b.iter() {
        candidates.push(x);
        let entry = x.div_ceil(l + 1);
        if entry > 1 {
            candidates.push(entry - 1);
        }
    }
    candidates.retain(|&n| n <= top);
    candidates.sort_unstable();
    candidates.dedup();
    let tail_from = ((top as f64).sqrt().ceil() as u64).max(1);
    let elems = b.elements();
    let mut best = (u64::MAX, 0u64);
    let mut tail_min: Option<u64> = None;
    for &n in &candidates {
        let c = count_in(elems, n, n * (l + 1));
        if c < best.0 {
            best = (c, n);
        }
        if n >= tail_from {
            tail_min = Some(tail_min.map_or(c, |t| t.min(c)));
        }
    }
    Ok(WindowCount {
        l,
        min_count: best.0,
        argmin: best.1,
        tail_min,
        windows: candidates.len() as u64,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Part {
    pub elements: Vec<u64>,
    pub condition1: Condition1,
}

/// Round-robin split of the sorted elements into three parts.
pub fn partition3(b: &SortedSet) -> Result<[Part; 3]> {
    if b.len() < 3 {
        return Err(Error::invalid("partition needs at least three elements"));
    }
    let part = |r: usize| -> Result<Part> {
        let elements: Vec<u64> = b.iter().skip(r).step_by(3).collect();
        let set = SortedSet::from_unsorted(elements.clone(), b.bound())?;
        Ok(Part {
            elements,
            condition1: condition1_sup(&set)?,
        })
    };
    Ok([part(0)?, part(1)?, part(2)?])
}

/// Consecutive ratio statistics of the prefix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioStats {
    pub ratios: Vec<f64>,
    /// Max ratio over the last half of the ratios.
    pub tail_max: f64,
    /// All ratios from `fit_index` on are at most `lambda_fit`.
    pub lambda_fit: f64,
    pub fit_index: usize,
    /// Every tail ratio is at most `2^(1/3)` (checked exactly).
    pub cube_root_two: bool,
}

pub fn sublacunarity(a: &SortedSet) -> Result<RatioStats> {
    if a.len() < 2 {
        return Err(Error::invalid("ratio statistics need at least two elements"));
    }
    let e = a.elements();
    let ratios: Vec<f64> = e.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect();
    let fit_index = ratios.len() / 2;
    let tail_max = ratios[fit_index..].iter().copied().fold(1.0, f64::max);
    let cube_root_two = e[fit_index..].windows(2).all(|w| {
        let (x, y) = (BigUint::from(w[0]), BigUint::from(w[1]));
        y.pow(3) <= x.pow(3) * 2u32
    });
    Ok(RatioStats {
        ratios,
        tail_max,
        lambda_fit: tail_max,
        fit_index,
        cube_root_two,
    })
}

/// `#(D ∩ [1, N]) / N^(1−δ)` at `N = bound, bound/2, …`, with `δ = 1/(1 + d(d+1))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaDensity {
    pub degree: u32,
    pub delta: f64,
    /// `(N, count, ratio)` in increasing `N`.
    pub checkpoints: Vec<(u64, u64, f64)>,
    /// Minimum ratio over checkpoints with `N ≥ √bound`.
    pub tail_min: f64,
}

pub fn delta_density(d: &SortedSet, degree: u32) -> Result<DeltaDensity> {
    if degree == 0 {
        return Err(Error::invalid("degree must be >= 1"));
    }
    let delta = 1.0 / (1.0 + (degree as f64) * (degree as f64 + 1.0));
    let bound = d.bound();
    let floor = (bound as f64).sqrt() as u64;
    let mut checkpoints = Vec::new();
    let mut n = bound;
    while n >= 1 {
        let count = d.elements().partition_point(|&x| x <= n) as u64;
        checkpoints.push((n, count, count as f64 / (n as f64).powf(1.0 - delta)));
        n /= 2;
    }
    checkpoints.reverse();
    let tail_min = checkpoints
        .iter()
        .filter(|c| c.0 >= floor)
        .map(|c| c.2)
        .fold(f64::INFINITY, f64::min);
    Ok(DeltaDensity {
        degree,
        delta,
        checkpoints,
        tail_min,
    })
}

/// `#{n ∈ A : q ∤ n}` for `q = 2..=qmax`.
pub fn nondivisible_counts(a: &SortedSet, qmax: u64) -> Vec<(u64, u64)> {
    (2..=qmax)
        .map(|q| (q, a.iter().filter(|n| n % q != 0).count() as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{enumerate, SetSpec};

    fn set(v: Vec<u64>, bound: u64) -> SortedSet {
        SortedSet::from_unsorted(v, bound).unwrap()
    }

    fn powers(a: u64, bound: u64) -> SortedSet {
        enumerate(&SetSpec::GammaSingle { a }, bound).unwrap()
    }

    #[test]
    fn powers_of_two_are_bounded() {
        let c = condition1_sup(&powers(2, 1 << 40)).unwrap();
        assert_eq!(c.sup, 1);
        assert_eq!(c.trend, Trend::Bounded);
    }

    #[test]
    fn powers_of_three_grow() {
        let b = powers(3, 1_000_000);
        let c = condition1_sup(&b).unwrap();
        let k = b.max().unwrap();
        assert_eq!(c.sup, (k as i128 + 1) / 2);
        assert_eq!(c.witness, k);
        assert_eq!(c.trend, Trend::Growing);
    }

    #[test]
    fn gamma_two_three_is_bounded() {
        let b = enumerate(&SetSpec::GammaAB { a: 2, b: 3 }, 1_000_000).unwrap();
        let c = condition1_sup(&b).unwrap();
        assert_eq!(c.sup, 1);
        assert_eq!(c.trend, Trend::Bounded);
    }

    #[test]
    fn prefix_of_powers_of_two_gives_one() {
        let mut v: Vec<u64> = (0..10).map(|k| 1 << k).collect();
        v.extend([1000, 1500, 3000]);
        assert_eq!(condition1_sup(&set(v.clone(), 4000)).unwrap().sup, 1);
        // A later element beyond 1 + (sum below) raises the sup.
        v.push(7000);
        assert_eq!(condition1_sup(&set(v, 8000)).unwrap().sup, 7000 - 6523);
    }

    #[test]
    fn window_examples() {
        let n = set((1..=1000).collect(), 1000);
        assert!(window_count(&n, 1).unwrap().min_count >= 1);
        assert_eq!(window_count(&powers(2, 1 << 30), 1).unwrap().min_count, 1);
        let w = window_count(&powers(4, 1 << 30), 1).unwrap();
        assert_eq!(w.min_count, 0);
        assert_eq!(w.tail_min, Some(0));
        assert!(window_count(&n, 0).is_err());
    }

    #[test]
    fn window_matches_full_scan() {
        for (b, l) in [(powers(3, 100_000), 2), (set(vec![3, 7, 8, 30, 31, 90, 200], 400), 1)] {
            let w = window_count(&b, l).unwrap();
            let brute = (1..=b.bound() / (l + 1))
                .map(|n| b.iter().filter(|&x| x > n && x <= (l + 1) * n).count() as u64)
                .min()
                .unwrap();
            assert_eq!(w.min_count, brute);
        }
    }

    #[test]
    fn partition_examples() {
        let parts = partition3(&set((1..=9).collect(), 9)).unwrap();
        assert_eq!(parts[0].elements, vec![1, 4, 7]);
        assert_eq!(parts[1].elements, vec![2, 5, 8]);
        assert_eq!(parts[2].elements, vec![3, 6, 9]);

        let g = enumerate(&SetSpec::GammaAB { a: 2, b: 3 }, 1_000_000).unwrap();
        for p in partition3(&g).unwrap() {
            assert_eq!(p.condition1.trend, Trend::Bounded);
        }
        for p in partition3(&powers(2, 1 << 60)).unwrap() {
            assert_eq!(p.condition1.trend, Trend::Growing);
        }
        assert!(partition3(&set(vec![1, 2], 2)).is_err());
    }

    #[test]
    fn ratio_examples() {
        let r = sublacunarity(&powers(3, 1 << 40)).unwrap();
        assert!(r.ratios.iter().all(|&x| x == 3.0));
        assert!(!r.cube_root_two);

        let g = enumerate(&SetSpec::GammaAB { a: 2, b: 3 }, 1_000_000).unwrap();
        let r = sublacunarity(&g).unwrap();
        assert!(r.tail_max < 1.5 && r.tail_max >= 1.0);
        assert!(r.ratios[r.fit_index..].iter().all(|&x| x <= r.lambda_fit));

        let n = sublacunarity(&set((1..=1000).collect(), 1000)).unwrap();
        assert!((n.ratios[998] - 1000.0 / 999.0).abs() < 1e-15);
        assert!(n.cube_root_two);
    }

    #[test]
    fn cube_root_two_is_exact_at_the_edge() {
        // 62^3 = 238328 ≤ 2·50^3 = 250000 < 63^3 = 250047.
        assert!(sublacunarity(&set(vec![40, 45, 50, 62], 100)).unwrap().cube_root_two);
        assert!(!sublacunarity(&set(vec![40, 45, 50, 63], 100)).unwrap().cube_root_two);
    }

    #[test]
    fn primes_meet_the_density_hypothesis() {
        let p = set(crate::sets::primes_up_to(1_000_000), 1_000_000);
        let d = delta_density(&p, 2).unwrap();
        assert!((d.delta - 1.0 / 7.0).abs() < 1e-15);
        assert!(d.tail_min > 0.1);
        let last = d.checkpoints.last().unwrap();
        assert_eq!((last.0, last.1), (1_000_000, 78_498));
    }

    #[test]
    fn nondivisible_counts_of_even_numbers() {
        let e = set((1..=50).map(|k| 2 * k).collect(), 100);
        let c = nondivisible_counts(&e, 4);
        assert_eq!(c, vec![(2, 0), (3, 34), (4, 25)]);
    }
}
