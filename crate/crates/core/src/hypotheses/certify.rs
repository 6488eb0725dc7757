use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::divergence::{divergence_probe, DivergenceProbe, SumTrend};
use super::growth::{condition1_sup, window_count, Condition1, Trend, WindowCount};
use super::residue::{residue_conditions, ResidueRecord};
use crate::diophantine::{Angle, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::fs::{coverage_report, fs_coverage_capped, CoverageReport, DEFAULT_MAX_BITS};
use crate::sets::{enumerate, SetSpec, SortedSet};

pub const DEFAULT_QMAX: u64 = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionStrategy {
    /// Sorted index `i` goes to `C` when `i ≡ 0 (mod 4)`, else to `B_{i mod 4}`.
    #[default]
    RoundRobin,
    /// `{aⁿ b_m}` split by `m`: the top `3(a−1)` indices form `B` (round-robin
    /// over `m`), everything else is `C`.
    Modulus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Satisfied,
    ConsistentAtBound,
    RefutedAtBound,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub strategy: PartitionStrategy,
    pub qmax: u64,
    pub alphas: Vec<Angle>,
    /// Coverage bitset cap in bits.
    pub max_bits: u64,
    /// Run the empirical coverage pass.
    pub coverage: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            strategy: PartitionStrategy::RoundRobin,
            qmax: DEFAULT_QMAX,
            alphas: ["sqrt:2", "golden"]
                .iter()
                .map(|t| Angle::parse(t, DEFAULT_PRECISION).expect("built-in angle"))
                .collect(),
            max_bits: DEFAULT_MAX_BITS,
            coverage: true,
        }
    }
}

/// Indices into the enumerated prefix.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub b1: Vec<usize>,
    pub b2: Vec<usize>,
    pub b3: Vec<usize>,
    pub c: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartCheck {
    pub part: String,
    pub size: usize,
    pub condition1: Option<Condition1>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DivergenceCheck {
    Probed(DivergenceProbe),
    Refused { alpha: String, required_bits: u64 },
    TooShort { alpha: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdicts {
    pub growth: Verdict,
    pub divergence: Verdict,
    pub residues: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub spec: SetSpec,
    pub bound: u64,
    pub element_count: usize,
    pub strategy: PartitionStrategy,
    pub partition: Partition,
    pub growth: Vec<PartCheck>,
    /// `#(B ∩ (N, 2N])` over the union of the three `B` parts.
    pub window: Option<WindowCount>,
    pub divergence: Vec<DivergenceCheck>,
    pub residues: Vec<ResidueRecord>,
    pub coverage: Option<CoverageReport>,
    pub verdicts: Verdicts,
}

impl Certificate {
    /// 0 when nothing is refuted or inconclusive, 1 when something is refuted, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        let v = [self.verdicts.growth, self.verdicts.divergence, self.verdicts.residues];
        if v.contains(&Verdict::RefutedAtBound) {
            1
        } else if v.contains(&Verdict::Inconclusive) {
            2
        } else {
            0
        }
    }
}

fn round_robin(n: usize) -> Partition {
    let mut p = Partition::default();
    for i in 0..n {
        match i % 4 {
            0 => p.c.push(i),
            1 => p.b1.push(i),
            2 => p.b2.push(i),
            _ => p.b3.push(i),
        }
    }
    p
}

/// Labels each element `aⁿ b_m` with its smallest `m`, then splits on `m`.
fn modulus_split(spec: &SetSpec, set: &SortedSet) -> Result<Partition> {
    let bound = set.bound();
    let (a, bs): (u64, Vec<u64>) = match spec {
        SetSpec::PowerTimesFinite { a, bs } => (*a, bs.clone()),
        SetSpec::GammaAB { a, b } => {
            // b_m = b^m for every m, with the finite range m ≤ 4a − 5 feeding B.
            let mut bs = vec![1u64];
            while let Some(x) = bs.last().unwrap().checked_mul(*b).filter(|&x| x <= bound) {
                bs.push(x);
            }
            (*a, bs)
        }
        _ => {
            return Err(Error::invalid(
                "the modulus strategy needs a gamma or power-times-finite family",
            ))
        }
    };
    let n_top = match spec {
        SetSpec::GammaAB { a, .. } => 4 * a - 5,
        _ => bs.len() as u64 - 1,
    };
    let span = 3 * (a - 1);
    if n_top < span {
        return Err(Error::invalid(format!(
            "need at least {} values b_m for a = {a}, got {}",
            span + 1,
            n_top + 1
        )));
    }
    let m_split = n_top - span;
    let mut label: HashMap<u64, u64> = HashMap::new();
    for (m, &b) in bs.iter().enumerate() {
        let mut x = b;
        while x <= bound {
            label.entry(x).or_insert(m as u64);
            match x.checked_mul(a) {
                Some(y) => x = y,
                None => break,
            }
        }
    }
    let mut p = Partition::default();
    for (i, x) in set.iter().enumerate() {
        let m = label[&x];
        if m <= m_split || m > n_top {
            p.c.push(i);
        } else {
            match (m - m_split - 1) % 3 {
                0 => p.b1.push(i),
                1 => p.b2.push(i),
                _ => p.b3.push(i),
            }
        }
    }
    Ok(p)
}

fn subset(set: &SortedSet, idx: &[usize]) -> Result<SortedSet> {
    SortedSet::from_unsorted(idx.iter().map(|&i| set.elements()[i]).collect(), set.bound())
}

/// Runs every hypothesis check on the prefix and assembles a certificate.
pub fn certify(spec: &SetSpec, bound: u64, opts: &CertifyOptions) -> Result<Certificate> {
    let set = enumerate(spec, bound)?;
    let partition = match opts.strategy {
        PartitionStrategy::RoundRobin => round_robin(set.len()),
        PartitionStrategy::Modulus => modulus_split(spec, &set)?,
    };

    let mut growth = Vec::new();
    for (name, idx) in [("B1", &partition.b1), ("B2", &partition.b2), ("B3", &partition.b3)] {
        let part = subset(&set, idx)?;
        growth.push(PartCheck {
            part: name.to_string(),
            size: part.len(),
            condition1: if part.is_empty() { None } else { Some(condition1_sup(&part)?) },
        });
    }
    let mut b_all: Vec<usize> = [&partition.b1, &partition.b2, &partition.b3]
        .into_iter()
        .flatten()
        .copied()
        .collect();
    b_all.sort_unstable();
    let window = if bound >= 2 { Some(window_count(&subset(&set, &b_all)?, 1)?) } else { None };
    let growth_verdict = if growth.iter().any(|g| g.condition1.is_none()) {
        Verdict::Inconclusive
    } else if growth.iter().any(|g| g.condition1.as_ref().unwrap().trend == Trend::Growing) {
        Verdict::RefutedAtBound
    } else {
        Verdict::ConsistentAtBound
    };

    let c = subset(&set, &partition.c)?;
    let divergence: Vec<DivergenceCheck> = opts
        .alphas
        .par_iter()
        .map(|alpha| {
            let name = alpha.origin().to_string();
            if c.len() < 2 {
                return Ok(DivergenceCheck::TooShort { alpha: name });
            }
            match divergence_probe(&c, alpha, c.len()) {
                Ok(p) => Ok(DivergenceCheck::Probed(p)),
                Err(Error::Precision { required_bits, .. }) => Ok(DivergenceCheck::Refused {
                    alpha: name,
                    required_bits,
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let divergence_verdict = if divergence.iter().any(
        |d| matches!(d, DivergenceCheck::Probed(p) if p.trend == SumTrend::Plateauing),
    ) {
        Verdict::RefutedAtBound
    } else if divergence.is_empty()
        || divergence.iter().any(|d| !matches!(d, DivergenceCheck::Probed(_)))
    {
        Verdict::Inconclusive
    } else {
        Verdict::ConsistentAtBound
    };

    let residues = residue_conditions(&c, opts.qmax)?;
    let residue_verdict = if residues.iter().all(|r| r.full) {
        Verdict::Satisfied
    } else {
        Verdict::RefutedAtBound
    };

    let coverage = if opts.coverage {
        Some(coverage_report(&fs_coverage_capped(&set, bound, opts.max_bits)?))
    } else {
        None
    };

    Ok(Certificate {
        spec: spec.clone(),
        bound,
        element_count: set.len(),
        strategy: opts.strategy,
        partition,
        growth,
        window,
        divergence,
        residues,
        coverage,
        verdicts: Verdicts {
            growth: growth_verdict,
            divergence: divergence_verdict,
            residues: residue_verdict,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fs::CoverageVerdict;

    #[test]
    fn gamma_two_three_is_consistent() {
        let cert = certify(&SetSpec::GammaAB { a: 2, b: 3 }, 1 << 20, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.verdicts.growth, Verdict::ConsistentAtBound);
        assert_eq!(cert.verdicts.divergence, Verdict::ConsistentAtBound);
        assert_eq!(cert.verdicts.residues, Verdict::Satisfied);
        assert_eq!(cert.coverage.as_ref().unwrap().threshold, Some(1));
        assert_eq!(cert.exit_code(), 0);
        assert_eq!(cert.residues.len(), 63);
        let sizes: Vec<usize> = cert.growth.iter().map(|g| g.size).collect();
        assert_eq!(sizes.iter().sum::<usize>() + cert.partition.c.len(), cert.element_count);
    }

    #[test]
    fn powers_of_three_refute_growth() {
        let cert = certify(&SetSpec::GammaSingle { a: 3 }, 1_000_000, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.verdicts.growth, Verdict::RefutedAtBound);
        assert_eq!(cert.coverage.as_ref().unwrap().verdict, CoverageVerdict::Sparse);
        assert_eq!(cert.exit_code(), 1);
    }

    #[test]
    fn gamma_three_six_fails_mod_three() {
        let cert = certify(&SetSpec::GammaAB { a: 3, b: 6 }, 1_000_000, &CertifyOptions::default()).unwrap();
        let q3 = cert.residues.iter().find(|r| r.q == 3).unwrap();
        assert!(!q3.full && !q3.dp_full);
        assert_eq!(cert.verdicts.residues, Verdict::RefutedAtBound);
        assert_ne!(cert.coverage.as_ref().unwrap().verdict, CoverageVerdict::EmpiricallyComplete);
        assert_eq!(cert.exit_code(), 1);
    }

    #[test]
    fn modulus_strategy_for_gamma_two_three() {
        let opts = CertifyOptions {
            strategy: PartitionStrategy::Modulus,
            ..CertifyOptions::default()
        };
        let spec = SetSpec::GammaAB { a: 2, b: 3 };
        let cert = certify(&spec, 1 << 20, &opts).unwrap();
        let set = enumerate(&spec, 1 << 20).unwrap();
        // B_j = 3^j · 2^ℕ₀ for j = 1, 2, 3; each part has condition-(I) sup 3^j.
        for (j, g) in cert.growth.iter().enumerate() {
            assert_eq!(g.condition1.as_ref().unwrap().sup, 3i128.pow(j as u32 + 1));
        }
        assert!(cert.partition.b1.iter().all(|&i| set.elements()[i] % 3 == 0));
        assert!(cert.partition.c.iter().any(|&i| set.elements()[i] == 81));
        assert_eq!(cert.exit_code(), 0);
    }

    #[test]
    fn modulus_strategy_rejects_other_families() {
        let opts = CertifyOptions {
            strategy: PartitionStrategy::Modulus,
            ..CertifyOptions::default()
        };
        assert!(certify(&SetSpec::GammaSingle { a: 2 }, 1000, &opts).is_err());
        let short = SetSpec::PowerTimesFinite { a: 3, bs: vec![1, 5] };
        assert!(certify(&short, 1000, &opts).is_err());
    }

    #[test]
    fn precision_refusal_is_inconclusive() {
        let opts = CertifyOptions {
            alphas: vec![Angle::parse("sqrt:2", 64).unwrap()],
            coverage: false,
            ..CertifyOptions::default()
        };
        let cert = certify(&SetSpec::GammaAB { a: 2, b: 3 }, 1 << 40, &opts).unwrap();
        assert!(matches!(
            cert.divergence[0],
            DivergenceCheck::Refused { required_bits, .. } if required_bits > 64
        ));
        assert_eq!(cert.verdicts.divergence, Verdict::Inconclusive);
        assert!(cert.coverage.is_none());
        assert_eq!(cert.exit_code(), 2);
    }

    #[test]
    fn refutation_carries_over_to_larger_bounds() {
        for bound in [100_000u64, 1_000_000] {
            let cert = certify(&SetSpec::GammaAB { a: 3, b: 6 }, bound, &CertifyOptions::default()).unwrap();
            assert_eq!(cert.verdicts.residues, Verdict::RefutedAtBound);
        }
    }
}
