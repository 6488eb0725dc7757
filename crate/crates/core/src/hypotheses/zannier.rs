use num_bigint::BigInt;
use num_integer::binomial;
use serde::Serialize;

use crate::diophantine::{vandermonde_witness, VandermondeWitness};
use crate::error::{Error, Result};
use crate::fs::residue_fs;
use crate::sets::{is_prime, IntPoly, SortedSet};

/// Elements searched above each floor.
pub const WINDOW: usize = 40;
pub const DEFAULT_ZMAX: i64 = 8;
/// Keeps every `Σ z_i x_i` inside `i128`.
pub const MAX_ZMAX: i64 = 1 << 20;
pub const COMBINATION_CAP: u64 = 100_000_000;
pub const DEFAULT_FLOORS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearWitness {
    pub xs: Vec<u64>,
    pub z: Vec<i64>,
    pub value: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ZannierOutcome {
    Found { witness: LinearWitness, combinations: u64 },
    Absent { combinations: u64 },
    Inconclusive { reason: String, combinations: u64 },
}

impl ZannierOutcome {
    pub fn witness(&self) -> Option<&LinearWitness> {
        match self {
            ZannierOutcome::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// Coefficient vectors with nonzero entries and a positive leading entry
/// (a witness and its negation are the same witness), in lexicographic order.
fn coefficient_vectors(k: usize, zmax: i64) -> Vec<Vec<i64>> {
    let free: Vec<i64> = (-zmax..=zmax).filter(|&z| z != 0).collect();
    let mut out: Vec<Vec<i64>> = (1..=zmax).map(|z| vec![z]).collect();
    for _ in 1..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                free.iter().map(move |&z| {
                    let mut w = v.clone();
                    w.push(z);
                    w
                })
            })
            .collect();
    }
    out
}

/// First `(indices, z)` in lexicographic order with `0 < |Σ z_i x_i| ≤ b`,
/// searching `k` distinct elements among the next `WINDOW` elements `≥ floor`.
pub fn zannier_witness(
    a: &SortedSet,
    k: usize,
    b: u64,
    zmax: i64,
    floor: u64,
    fixed_z: Option<&[i64]>,
) -> Result<ZannierOutcome> {
    if k < 2 || b == 0 || !(1..=MAX_ZMAX).contains(&zmax) {
        return Err(Error::invalid(format!("need k >= 2, b >= 1 and 1 <= zmax <= {MAX_ZMAX}")));
    }
    if let Some(z) = fixed_z {
        if z.len() != k || z.iter().all(|&c| c == 0) {
            return Err(Error::invalid("fixed coefficients must have length k and not all be 0"));
        }
    }
    let start = a.elements().partition_point(|&x| x < floor);
    let window: Vec<i128> = a.elements()[start..]
        .iter()
        .take(WINDOW)
        .map(|&x| x as i128)
        .collect();
    let zs: Vec<Vec<i64>> = match fixed_z {
        Some(z) => vec![z.to_vec()],
        None => coefficient_vectors(k, zmax),
    };
    let tuples = binomial(window.len() as u64, k as u64);
    let combinations = tuples.saturating_mul(zs.len() as u64);
    if window.len() < k {
        return Ok(ZannierOutcome::Inconclusive {
            reason: format!("only {} elements at or above {floor} in the prefix", window.len()),
            combinations: 0,
        });
    }
    if combinations > COMBINATION_CAP {
        return Ok(ZannierOutcome::Inconclusive {
            reason: format!("{combinations} combinations exceed the cap {COMBINATION_CAP}"),
            combinations,
        });
    }
    let b = b as i128;
    let mut idx: Vec<usize> = (0..k).collect();
    let mut tried = 0u64;
    loop {
        for z in &zs {
            tried += 1;
            let v: i128 = idx.iter().zip(z).map(|(&i, &c)| c as i128 * window[i]).sum();
            if v != 0 && v.abs() <= b {
                return Ok(ZannierOutcome::Found {
                    witness: LinearWitness {
                        xs: idx.iter().map(|&i| window[i] as u64).collect(),
                        z: z.clone(),
                        value: v,
                    },
                    combinations: tried,
                });
            }
        }
        // Next k-subset in lexicographic order.
        let n = window.len();
        let Some(p) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            break;
        };
        idx[p] += 1;
        for q in p + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    Ok(ZannierOutcome::Absent { combinations: tried })
}

/// `count` floors spaced geometrically from the smallest element to the
/// point where a full window still fits.
pub fn geometric_floors(a: &SortedSet, count: usize) -> Vec<u64> {
    let e = a.elements();
    if e.is_empty() || count == 0 {
        return Vec::new();
    }
    let lo = e[0].max(1) as f64;
    let hi = e[e.len().saturating_sub(WINDOW)].max(1) as f64;
    let mut floors: Vec<u64> = (0..count)
        .map(|i| {
            let t = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
            (lo * (hi / lo).powf(t)).round() as u64
        })
        .collect();
    floors.dedup();
    floors
}

#[derive(Clone, Debug, Serialize)]
pub struct ZannierReport {
    pub k: usize,
    pub b: u64,
    pub per_floor: Vec<(u64, ZannierOutcome)>,
    /// `FS(A)` meets every class mod `q` for `q = 2..=b`.
    pub residues_ok: bool,
    pub witnessed_at_every_floor: bool,
}

/// Witness search at several floors plus the residue-class side condition.
pub fn zannier_check(
    a: &SortedSet,
    k: usize,
    b: u64,
    zmax: i64,
    floors: &[u64],
    fixed_z: Option<&[i64]>,
) -> Result<ZannierReport> {
    let per_floor = floors
        .iter()
        .map(|&f| zannier_witness(a, k, b, zmax, f, fixed_z).map(|o| (f, o)))
        .collect::<Result<Vec<_>>>()?;
    let mut residues_ok = true;
    for q in 2..=b {
        residues_ok &= residue_fs(a.iter(), q)?.full;
    }
    Ok(ZannierReport {
        k,
        b,
        witnessed_at_every_floor: per_floor.iter().all(|(_, o)| o.witness().is_some()),
        per_floor,
        residues_ok,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeWitness {
    pub primes: Vec<u64>,
    #[serde(serialize_with = "crate::serde_dec::seq")]
    pub values: Vec<BigInt>,
    pub witness: VandermondeWitness,
}

/// Integer combination of `P` at `deg P + 1` consecutive primes `≥ floor`.
pub fn zannier_prime_witness(p: &IntPoly, floor: u64) -> Result<PrimeWitness> {
    let need = p.degree() + 1;
    if floor > i64::MAX as u64 / 2 {
        return Err(Error::invalid("floor too large"));
    }
    let primes: Vec<u64> = (floor..).filter(|&q| is_prime(q)).take(need).collect();
    let nodes: Vec<i64> = primes.iter().map(|&q| q as i64).collect();
    let witness = vandermonde_witness(p, &nodes)?;
    Ok(PrimeWitness {
        values: primes.iter().map(|&q| p.eval_u64(q)).collect(),
        primes,
        witness,
    })
}
