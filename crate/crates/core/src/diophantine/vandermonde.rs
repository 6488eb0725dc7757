use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sets::IntPoly;

/// Integers `z_i` with `Σ z_i P(n_i) = D ≠ 0`, all computed exactly.
#[derive(Clone, Debug, Serialize)]
pub struct VandermondeWitness {
    pub nodes: Vec<i64>,
    #[serde(serialize_with = "crate::serde_dec::seq")]
    pub z: Vec<BigInt>,
    #[serde(rename = "D", serialize_with = "crate::serde_dec::one")]
    pub det: BigInt,
    /// `max_i |n_i − n_0|`.
    #[serde(rename = "M")]
    pub spread: u64,
    #[serde(serialize_with = "crate::serde_dec::one")]
    pub value: BigInt,
    /// `max|z_i| / M^C(d+1,2)`.
    pub z_ratio: f64,
    /// `|value| / M^C(d+1,2)`.
    pub value_ratio: f64,
    /// `(d+1)! (H 2^(d+1))^(d+1)` with `H` the largest coefficient size; both ratios stay below it.
    pub c_bound: f64,
    pub bounds_ok: bool,
}

/// Fraction-free Gaussian elimination; exact for integer matrices.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Builds the witness for `P` at `d + 1` distinct nodes.
///
/// Row `i` of `A` holds the coefficients of `P(x + m_i)`, `m_i = n_i − n_0`.
/// Solving `Aᵀ z = D e_0` gives `Σ z_i P(x + m_i) ≡ D`, evaluated at `x = n_0`.
pub fn vandermonde_witness(p: &IntPoly, nodes: &[i64]) -> Result<VandermondeWitness> {
    let d = p.degree();
    if nodes.len() != d + 1 {
        return Err(Error::invalid(format!(
            "degree {d} needs {} nodes, got {}",
            d + 1,
            nodes.len()
        )));
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("nodes must be distinct"));
    }
    let n0 = BigInt::from(nodes[0]);
    let rows: Vec<Vec<BigInt>> = nodes
        .iter()
        .map(|&n| p.shifted(&(BigInt::from(n) - &n0)))
        .collect();
    let det = bareiss_det(rows.clone());
    if det.is_zero() {
        return Err(Error::invalid("singular system; nodes are not distinct"));
    }
    // Cramer on Aᵀ: column i of Aᵀ is row i of A.
    let transpose: Vec<Vec<BigInt>> = (0..=d)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let mut z = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let mut m = transpose.clone();
        for (j, row) in m.iter_mut().enumerate() {
            row[i] = if j == 0 { det.clone() } else { BigInt::zero() };
        }
        let num = bareiss_det(m);
        debug_assert!((&num % &det).is_zero());
        z.push(num / &det);
    }
    let value: BigInt = z
        .iter()
        .zip(nodes)
        .map(|(zi, &n)| zi * p.eval_big(&BigInt::from(n)))
        .sum();
    if value != det {
        return Err(Error::invalid(format!(
            "witness check failed: value {value} != D {det}"
        )));
    }

    let spread = nodes
        .iter()
        .map(|&n| (n as i128 - nodes[0] as i128).unsigned_abs() as u64)
        .max()
        .unwrap();
    let exponent = binomial(d as u64 + 1, 2) as i32;
    let scale = (spread as f64).powi(exponent);
    let zmax = z.iter().map(|x| x.abs()).max().unwrap();
    let h = p.coeffs().iter().map(|c| c.unsigned_abs()).max().unwrap() as f64;
    let c_bound = (1..=d as u64 + 1).product::<u64>() as f64 * (h * 2f64.powi(d as i32 + 1)).powi(d as i32 + 1);
    let z_ratio = zmax.to_f64().unwrap_or(f64::INFINITY) / scale;
    let value_ratio = value.abs().to_f64().unwrap_or(f64::INFINITY) / scale;
    Ok(VandermondeWitness {
        nodes: nodes.to_vec(),
        z,
        det,
        spread,
        value,
        z_ratio,
        value_ratio,
        c_bound,
        bounds_ok: z_ratio <= c_bound && value_ratio <= c_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn linear_example() {
        let w = vandermonde_witness(&IntPoly::monomial(1), &[5, 7]).unwrap();
        assert_eq!(w.z, ints(&[1, -1]));
        assert_eq!(w.det, BigInt::from(-2));
        assert_eq!(w.value, BigInt::from(-2));
    }

    #[test]
    fn quadratic_examples() {
        for nodes in [[5, 6, 7], [0, 1, 2]] {
            let w = vandermonde_witness(&IntPoly::monomial(2), &nodes).unwrap();
            assert_eq!(w.z, ints(&[-2, 4, -2]));
            assert_eq!(w.det, BigInt::from(-4));
            assert_eq!(w.value, BigInt::from(-4));
        }
    }

    #[test]
    fn bad_inputs() {
        assert!(vandermonde_witness(&IntPoly::monomial(2), &[1, 1, 2]).is_err());
        assert!(vandermonde_witness(&IntPoly::monomial(2), &[1, 2]).is_err());
    }

    #[test]
    fn bareiss_matches_permutation_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4usize {
            for _ in 0..50 {
                let m: Vec<Vec<i64>> = (0..n)
                    .map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect())
                    .collect();
                let mut expected = 0i64;
                let mut perm: Vec<usize> = (0..n).collect();
                permute(&mut perm, 0, &mut |p| {
                    let inversions = (0..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .filter(|&(i, j)| p[i] > p[j])
                        .count();
                    let term: i64 = (0..n).map(|i| m[i][p[i]]).product();
                    expected += if inversions % 2 == 0 { term } else { -term };
                });
                let big = m.iter().map(|r| ints(r)).collect();
                assert_eq!(bareiss_det(big), BigInt::from(expected));
            }
        }
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn random_batch_is_exact_with_finite_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2014);
        let mut worst = 0f64;
        for _ in 0..1000 {
            let d = rng.gen_range(1..=4usize);
            let mut coeffs: Vec<i64> = (0..d).map(|_| rng.gen_range(-9..=9)).collect();
            coeffs.push(rng.gen_range(1..=9));
            let p = IntPoly::new(coeffs).unwrap();
            let m = rng.gen_range(d as i64..=30);
            let base = rng.gen_range(-50..=50i64);
            let mut offsets: Vec<i64> = vec![0];
            while offsets.len() < d + 1 {
                let o = rng.gen_range(-m..=m);
                if !offsets.contains(&o) {
                    offsets.push(o);
                }
            }
            let nodes: Vec<i64> = offsets.iter().map(|o| base + o).collect();
            let w = vandermonde_witness(&p, &nodes).unwrap();
            assert_eq!(w.value, w.det);
            assert!(!w.det.is_zero());
            assert!(w.bounds_ok);
            worst = worst.max(w.z_ratio);
        }
        assert!(worst.is_finite());
    }
}
