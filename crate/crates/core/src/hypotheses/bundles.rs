use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sets::{gcd_all, IntPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReciprocalSum {
    pub part: usize,
    /// Exact `Σ 1/(a − 1)` as `p/q`.
    pub sum: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeglReport {
    pub parts: Vec<ReciprocalSum>,
    pub gcd_s4: u64,
    pub s4_pass: bool,
    pub pass: bool,
}

/// `Σ_{a∈S_i} 1/(a−1) ≥ 1` for `i = 1, 2, 3` and `gcd(S_4) = 1`, exactly.
pub fn begl_check(s: [&[u64]; 4]) -> Result<BeglReport> {
    let mut seen = BTreeSet::new();
    for part in s {
        if part.is_empty() {
            return Err(Error::invalid("each part must be nonempty"));
        }
        for &a in part {
            if a < 2 {
                return Err(Error::invalid(format!("elements must be >= 2, got {a}")));
            }
            if !seen.insert(a) {
                return Err(Error::invalid(format!("{a} appears in more than one part")));
            }
        }
    }
    let parts: Vec<ReciprocalSum> = s[..3]
        .iter()
        .enumerate()
        .map(|(i, part)| {
            let sum: BigRational = part
                .iter()
                .map(|&a| BigRational::new(BigInt::one(), BigInt::from(a - 1)))
                .sum();
            ReciprocalSum {
                part: i + 1,
                pass: sum >= BigRational::one(),
                sum: sum.to_string(),
            }
        })
        .collect();
    let gcd_s4 = gcd_all(s[3].iter().copied());
    let s4_pass = gcd_s4 == 1;
    Ok(BeglReport {
        pass: s4_pass && parts.iter().all(|p| p.pass),
        parts,
        gcd_s4,
        s4_pass,
    })
}

/// Hypotheses for `{aⁿ b_m : n ≥ 0, m ≤ N}` with the split `M = N − 3(a−1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerTimesFiniteBundle {
    pub a: u64,
    pub n: u64,
    /// `N − 3(a−1)`; negative when the sequence is too short.
    pub m: i64,
    /// Pair `(i, j)` with `b_j / b_i` an integral power of `a`, if any.
    pub log_clash: Option<(usize, usize)>,
    pub distinct_logs: bool,
    pub gcd_head: u64,
    pub gcd_ok: bool,
    pub coprime_count: u64,
    pub coprime_ok: bool,
    pub holds: bool,
}

fn is_power_of(a: u64, mut x: u64) -> bool {
    while x > 1 && x % a == 0 {
        x /= a;
    }
    x == 1
}

pub fn power_times_finite_bundle(a: u64, bs: &[u64]) -> Result<PowerTimesFiniteBundle> {
    if a < 2 || bs.is_empty() || bs.contains(&0) {
        return Err(Error::invalid("need a >= 2 and a nonempty list of positive b_m"));
    }
    let n = bs.len() as u64 - 1;
    let m = n as i64 - 3 * (a as i64 - 1);
    let mut log_clash = None;
    'outer: for i in 0..bs.len() {
        for j in i + 1..bs.len() {
            let (lo, hi) = if bs[i] <= bs[j] { (bs[i], bs[j]) } else { (bs[j], bs[i]) };
            if hi % lo == 0 && is_power_of(a, hi / lo) {
                log_clash = Some((i, j));
                break 'outer;
            }
        }
    }
    let head: &[u64] = if m >= 0 { &bs[..=m as usize] } else { &[] };
    let gcd_head = gcd_all(head.iter().copied());
    let coprime_count = head.iter().filter(|b| b.gcd(&a) == 1).count() as u64;
    let gcd_ok = gcd_head == 1;
    let coprime_ok = coprime_count >= a - 1;
    Ok(PowerTimesFiniteBundle {
        a,
        n,
        m,
        distinct_logs: log_clash.is_none(),
        log_clash,
        gcd_head,
        gcd_ok,
        coprime_count,
        coprime_ok,
        holds: log_clash.is_none() && gcd_ok && coprime_ok,
    })
}

/// Hypotheses for `{∏ a_i^{P_i(n_i)}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyPowerBundle {
    pub s: usize,
    pub max_degree: usize,
    pub gcd: u64,
    pub gcd_ok: bool,
    /// Rank of the exponent matrix over a pairwise coprime basis.
    pub log_rank: usize,
    pub logs_independent: bool,
    /// Known admissible count of factors for this degree, when one is known.
    pub s0: Option<usize>,
    pub holds: Option<bool>,
}

/// Pairwise coprime integers that multiplicatively generate every input.
fn coprime_basis(values: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = values.iter().copied().filter(|&v| v > 1).collect();
    basis.sort_unstable();
    basis.dedup();
    loop {
        let mut split = None;
        'find: for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let g = basis[i].gcd(&basis[j]);
                if g > 1 {
                    split = Some((i, j, g));
                    break 'find;
                }
            }
        }
        let Some((i, j, g)) = split else {
            return basis;
        };
        let (x, y) = (basis[i], basis[j]);
        basis.retain(|&v| v != x && v != y);
        basis.extend([x / g, y / g, g].into_iter().filter(|&v| v > 1));
        basis.sort_unstable();
        basis.dedup();
    }
}

fn exponent_vector(mut v: u64, basis: &[u64]) -> Vec<i64> {
    basis
        .iter()
        .map(|&b| {
            let mut e = 0;
            while v % b == 0 {
                v /= b;
                e += 1;
            }
            e
        })
        .collect()
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            let f = &rows[i][c] / &rows[r][c];
            for k in c..cols {
                let v = &f * &rows[r][k];
                rows[i][k] -= v;
            }
        }
        r += 1;
    }
    r
}

pub fn poly_power_bundle(bases: &[u64], polys: &[IntPoly]) -> Result<PolyPowerBundle> {
    if bases.is_empty() || bases.len() != polys.len() || bases.iter().any(|&a| a < 2) {
        return Err(Error::invalid("need equally many bases >= 2 and polynomials"));
    }
    let basis = coprime_basis(bases);
    let rows: Vec<Vec<BigRational>> = bases
        .iter()
        .map(|&a| {
            exponent_vector(a, &basis)
                .into_iter()
                .map(|e| BigRational::from_integer(BigInt::from(e)))
                .collect()
        })
        .collect();
    let log_rank = rank(rows);
    let gcd = gcd_all(bases.iter().copied());
    let max_degree = polys.iter().map(IntPoly::degree).max().unwrap();
    let s0 = (max_degree <= 2).then_some(6);
    let s = bases.len();
    let logs_independent = log_rank == s;
    Ok(PolyPowerBundle {
        s,
        max_degree,
        gcd,
        gcd_ok: gcd == 1,
        log_rank,
        logs_independent,
        s0,
        holds: s0.map(|s0| s >= s0 && gcd == 1 && logs_independent),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn begl_examples() {
        let r = begl_check([&[2], &[3, 4, 5, 6, 7], &[8, 9, 10, 11, 12, 13, 14, 15, 16], &[17, 19]]).unwrap();
        assert!(r.parts[0].pass);
        assert_eq!(r.parts[0].sum, "1");
        // 87/60 in lowest terms.
        assert_eq!(r.parts[1].sum, "29/20");
        assert!(r.parts[1].pass);
        // 1/7 + … + 1/15 < 1.
        assert!(!r.parts[2].pass);
        assert!(r.s4_pass && !r.pass);

        let r = begl_check([&[2], &[3, 5, 7, 9, 11], &[8], &[4, 6]]).unwrap();
        assert_eq!(r.gcd_s4, 2);
        assert!(!r.s4_pass);
    }

    #[test]
    fn begl_is_exact_at_the_boundary() {
        // 1/2 + 1/3 + 1/6 = 1 exactly.
        let r = begl_check([&[3, 4, 7], &[2], &[5, 6, 9, 10], &[11, 12]]).unwrap();
        assert_eq!(r.parts[0].sum, "1");
        assert!(r.parts[0].pass);
    }

    #[test]
    fn begl_rejects_bad_parts() {
        assert!(begl_check([&[2], &[2, 3], &[4], &[5]]).is_err());
        assert!(begl_check([&[1], &[2], &[3], &[5]]).is_err());
        assert!(begl_check([&[2], &[], &[3], &[5]]).is_err());
    }

    #[test]
    fn power_times_finite_for_gamma_prefix() {
        // b_m = 3^m, m ≤ 4a − 5 = 3 for a = 2.
        let r = power_times_finite_bundle(2, &[1, 3, 9, 27]).unwrap();
        assert_eq!(r.m, 0);
        assert!(r.holds);
        // b_m = 5^m with a = 3 needs N = 7.
        let r = power_times_finite_bundle(3, &[1, 5, 25, 125, 625, 3125, 15625, 78125]).unwrap();
        assert_eq!(r.m, 1);
        assert!(r.holds);
        let r = power_times_finite_bundle(3, &[1, 5, 25]).unwrap();
        assert!(r.m < 0 && !r.holds);
    }

    #[test]
    fn power_times_finite_detects_failures() {
        let r = power_times_finite_bundle(2, &[3, 12, 5, 7]).unwrap();
        assert_eq!(r.log_clash, Some((0, 1)));
        let r = power_times_finite_bundle(2, &[6, 3, 5, 7]).unwrap();
        assert_eq!((r.gcd_head, r.gcd_ok), (6, false));
        let r = power_times_finite_bundle(3, &[1, 2, 5, 7, 11, 13, 17, 19]).unwrap();
        assert!(r.coprime_ok);
        let r = power_times_finite_bundle(3, &[6, 2, 5, 7, 11, 13, 17, 19]).unwrap();
        assert_eq!(r.coprime_count, 1);
        assert!(!r.coprime_ok);
    }

    #[test]
    fn multiplicative_rank() {
        assert_eq!(coprime_basis(&[12, 18]), vec![2, 3]);
        let sq = IntPoly::monomial(2);
        let r = poly_power_bundle(&[2, 3, 5, 7, 11, 13], &vec![sq.clone(); 6]).unwrap();
        assert!(r.logs_independent && r.gcd_ok);
        assert_eq!(r.holds, Some(true));
        // 4 = 2², so log 2 and log 4 are dependent.
        let r = poly_power_bundle(&[2, 4, 3], &vec![sq.clone(); 3]).unwrap();
        assert_eq!(r.log_rank, 2);
        assert!(!r.logs_independent);
        // 6, 10, 15 are independent even though no pair is coprime.
        let r = poly_power_bundle(&[6, 10, 15], &vec![sq.clone(); 3]).unwrap();
        assert_eq!(r.log_rank, 3);
        assert_eq!(r.gcd, 1);
        assert_eq!(r.holds, Some(false));
        // 12 = 2²·3 and 18 = 2·3² are independent, 12·18 = 216 = 6³ is not new.
        let r = poly_power_bundle(&[12, 18, 216], &vec![IntPoly::monomial(3); 3]).unwrap();
        assert_eq!(r.log_rank, 2);
        assert_eq!(r.s0, None);
    }
}
