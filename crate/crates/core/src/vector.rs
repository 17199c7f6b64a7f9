//! Vector-valued subset sum by both reductions (base-C scalarization and the
//! multivariate character sum), plus the 0-1 knapsack solver built on top.

use serde::Serialize;

use crate::charsum::charsum_multivariate;
use crate::error::{Error, Result};
use crate::model::{
    check_capacity, vector_capacity, Instance, KnapsackInstance, VectorInstance,
    DEFAULT_MAX_CAPACITY,
};
use crate::numtheory::{add_mod, mod_inv_raw, mod_pow_raw, mul_mod, next_prime, Residue};

/// How `vector_decide` evaluates feasibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Collapse to a scalar instance with base-C digits (default: one blowup
    /// of C^k instead of a (p-1)^k sum per prime).
    Scalarize,
    /// Run the decision loop on the k-fold nested character sum directly.
    Multivariate,
}

/// Knapsack optimum and a witness achieving it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnapsackResult {
    pub value: i64,
    pub subset: Vec<usize>,
}

/// Collapses vector entries to scalars in base C = vector capacity; the digit
/// bound |sum_S m_ij - B_j| < C makes the solution sets coincide.
pub fn scalarize(vinstance: &VectorInstance) -> Result<Instance> {
    let c = vector_capacity(vinstance).0 as i128;
    let collapse = |row: &[i64]| -> Result<i64> {
        let mut acc: i128 = 0;
        let mut digit: i128 = 1;
        for &v in row {
            acc = digit
                .checked_mul(v as i128)
                .and_then(|t| acc.checked_add(t))
                .ok_or_else(|| Error::Overflow("scalarized entry".into()))?;
            digit = digit
                .checked_mul(c)
                .ok_or_else(|| Error::Overflow("scalarization base".into()))?;
        }
        i64::try_from(acc).map_err(|_| Error::Overflow("scalarized entry".into()))
    };
    let m = vinstance
        .m
        .iter()
        .map(|row| collapse(row))
        .collect::<Result<Vec<i64>>>()?;
    let b = collapse(&vinstance.b)?;
    Ok(Instance::new(m, b))
}

fn floor_log2(p: u64) -> u64 {
    63 - u64::from(p.leading_zeros())
}

/// Decides vector feasibility by the chosen reduction.
pub fn vector_decide(vinstance: &VectorInstance, method: Method) -> Result<bool> {
    vector_decide_with(vinstance, method, DEFAULT_MAX_CAPACITY)
}

pub fn vector_decide_with(
    vinstance: &VectorInstance,
    method: Method,
    max_capacity: u64,
) -> Result<bool> {
    let cap = check_capacity(vector_capacity(vinstance), max_capacity)?;
    match method {
        Method::Scalarize => {
            let scalar = scalarize(vinstance)?;
            // the scalar capacity is what the decide loop spends, cap it too
            Ok(crate::decider::decide_with(&scalar, false, max_capacity.max(cap.0))?.0)
        }
        Method::Multivariate => {
            let n = vinstance.n() as u64;
            let mut c: u64 = 0;
            let mut p = next_prime(cap.0)?;
            loop {
                if c > n {
                    return Ok(false);
                }
                if !charsum_multivariate(vinstance, p)?.is_zero() {
                    return Ok(true);
                }
                c += floor_log2(p);
                p = next_prime(p)?;
            }
        }
    }
}

/// A mod p for a vector instance, p > vector capacity: the nested sum carries
/// a sign of (-1)^k.
pub fn vector_count_mod_p(vinstance: &VectorInstance, p: u64) -> Result<Residue> {
    let s = charsum_multivariate(vinstance, p)?;
    let value = if vinstance.k() % 2 == 0 {
        s.value
    } else {
        (p - s.value) % p
    };
    Ok(Residue { value, modulus: p })
}

/// Maximizes the value sum over subsets with weight sum at most B.
///
/// Sweeps achievable (weight, value) pairs through the k = 2 character-sum
/// tables, one batch per prime, accumulating primes until the soundness
/// budget sum floor(log2 p) > n is met; a pair is feasible iff some prime
/// reports a nonzero residue. The witness is then rebuilt by index-order
/// conditioning on `vector_decide`.
pub fn knapsack_optimize(kinstance: &KnapsackInstance) -> Result<KnapsackResult> {
    knapsack_optimize_with(kinstance, DEFAULT_MAX_CAPACITY)
}

pub fn knapsack_optimize_with(
    kinstance: &KnapsackInstance,
    max_capacity: u64,
) -> Result<KnapsackResult> {
    let n = kinstance.n();
    let w_lo: i64 = kinstance.w.iter().map(|&w| w.min(0)).sum();
    let w_hi: i64 = kinstance.w.iter().map(|&w| w.max(0)).sum();
    let v_lo: i64 = kinstance.v.iter().map(|&v| v.min(0)).sum();
    let v_hi: i64 = kinstance.v.iter().map(|&v| v.max(0)).sum();
    let abs_total: u64 = kinstance
        .w
        .iter()
        .chain(kinstance.v.iter())
        .map(|&x| x.unsigned_abs())
        .sum();
    // capacity of the worst target pair in the sweep box
    let c_max = 1 + 2 * abs_total;
    check_capacity(crate::model::Capacity(c_max), max_capacity)?;

    let w_span = (w_hi - w_lo + 1) as usize;
    let v_span = (v_hi - v_lo + 1) as usize;
    let mut feasible = vec![false; w_span * v_span];
    let mut budget: u64 = 0;
    let mut p = next_prime(c_max)?;
    while budget <= n as u64 {
        mark_feasible_pairs(kinstance, p, (w_lo, w_hi), (v_lo, v_hi), &mut feasible)?;
        budget += floor_log2(p);
        p = next_prime(p)?;
    }

    let w_cap = w_hi.min(kinstance.b);
    for v in (v_lo..=v_hi).rev() {
        for w in w_lo..=w_cap {
            let idx = (w - w_lo) as usize * v_span + (v - v_lo) as usize;
            if feasible[idx] {
                let subset = knapsack_witness(kinstance, w, v, max_capacity)?;
                return Ok(KnapsackResult { value: v, subset });
            }
        }
    }
    Err(Error::NoFeasibleSubset)
}

/// One prime's worth of the pair sweep: evaluates the k = 2 nested sum for
/// every target in the box by staged contraction (product table over
/// (x1, x2), then the x2 and x1 character sums), and ORs nonzero residues
/// into `feasible`.
fn mark_feasible_pairs(
    kinstance: &KnapsackInstance,
    p: u64,
    (w_lo, w_hi): (i64, i64),
    (v_lo, v_hi): (i64, i64),
    feasible: &mut [bool],
) -> Result<()> {
    let span = (p - 1) as usize;
    let w_span = (w_hi - w_lo + 1) as usize;
    let v_span = (v_hi - v_lo + 1) as usize;

    // f[x1][x2] = prod_i (1 + x1^(w_i) x2^(v_i))
    let pow_w: Vec<Vec<u64>> = kinstance
        .w
        .iter()
        .map(|&wi| (1..p).map(|x| mod_pow_raw(x, wi, p)).collect())
        .collect::<Result<_>>()?;
    let pow_v: Vec<Vec<u64>> = kinstance
        .v
        .iter()
        .map(|&vi| (1..p).map(|x| mod_pow_raw(x, vi, p)).collect())
        .collect::<Result<_>>()?;
    let mut f = vec![1u64 % p; span * span];
    for i in 0..kinstance.n() {
        for x1 in 0..span {
            let row = &mut f[x1 * span..(x1 + 1) * span];
            let pw = pow_w[i][x1];
            for (x2, cell) in row.iter_mut().enumerate() {
                let t = mul_mod(pw, pow_v[i][x2], p);
                *cell = mul_mod(*cell, add_mod(t, 1, p), p);
            }
        }
    }

    // g[x1][v] = sum_x2 x2^(-v) f[x1][x2]
    let inv: Vec<u64> = (1..p).map(|x| mod_inv_raw(x, p)).collect::<Result<_>>()?;
    let mut g = vec![0u64; span * v_span];
    for x2 in 0..span {
        let mut coeff = mod_pow_raw((x2 + 1) as u64, -v_lo, p)?;
        for v_idx in 0..v_span {
            for x1 in 0..span {
                g[x1 * v_span + v_idx] = add_mod(
                    g[x1 * v_span + v_idx],
                    mul_mod(coeff, f[x1 * span + x2], p),
                    p,
                );
            }
            coeff = mul_mod(coeff, inv[x2], p);
        }
    }

    // table[w][v] = sum_x1 x1^(-w) g[x1][v] = A(w, v) mod p (sign (-1)^2)
    let mut table = vec![0u64; w_span * v_span];
    for x1 in 0..span {
        let mut coeff = mod_pow_raw((x1 + 1) as u64, -w_lo, p)?;
        for w_idx in 0..w_span {
            for v_idx in 0..v_span {
                table[w_idx * v_span + v_idx] = add_mod(
                    table[w_idx * v_span + v_idx],
                    mul_mod(coeff, g[x1 * v_span + v_idx], p),
                    p,
                );
            }
            coeff = mul_mod(coeff, inv[x1], p);
        }
    }
    for (flag, &residue) in feasible.iter_mut().zip(table.iter()) {
        *flag |= residue != 0;
    }
    Ok(())
}

/// Rebuilds a lexicographically smallest witness for a feasible target pair
/// by fixing elements in index order, keeping the remaining sub-problem
/// feasible at every step.
fn knapsack_witness(
    kinstance: &KnapsackInstance,
    target_w: i64,
    target_v: i64,
    max_capacity: u64,
) -> Result<Vec<usize>> {
    let n = kinstance.n();
    let mut subset = Vec::new();
    let (mut tw, mut tv) = (target_w, target_v);
    for i in 0..n {
        // an exhausted target completes with the empty set, which sorts
        // before any continuation
        if (tw, tv) == (0, 0) {
            break;
        }
        let tail: Vec<Vec<i64>> = (i + 1..n)
            .map(|j| vec![kinstance.w[j], kinstance.v[j]])
            .collect();
        let with =
            VectorInstance::new(tail, vec![tw - kinstance.w[i], tv - kinstance.v[i]])?;
        if vector_decide_with(&with, Method::Scalarize, max_capacity)? {
            subset.push(i + 1);
            tw -= kinstance.w[i];
            tv -= kinstance.v[i];
        }
    }
    if (tw, tv) != (0, 0) {
        return Err(Error::Internal("witness misses the target pair".into()));
    }
    Ok(subset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_count, oracle_count_vector, oracle_knapsack};

    fn vinst(m: &[&[i64]], b: &[i64]) -> VectorInstance {
        VectorInstance::new(m.iter().map(|r| r.to_vec()).collect(), b.to_vec()).unwrap()
    }

    #[test]
    fn scalarize_examples() {
        let s = scalarize(&vinst(&[&[1, 0], &[0, 1]], &[1, 1])).unwrap();
        assert_eq!(s, Instance::new(vec![1, 5], 6)); // C = 5

        let s = scalarize(&vinst(&[&[7]], &[7])).unwrap();
        assert_eq!(s, Instance::new(vec![7], 7)); // k = 1 is the identity

        let s = scalarize(&vinst(&[&[2, -3]], &[-1, 4])).unwrap();
        assert_eq!(s, Instance::new(vec![-31], 43)); // C = 11
    }

    #[test]
    fn scalarize_preserves_counts() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..60 {
            let n = (next() % 6) as usize;
            let k = (next() % 3 + 1) as usize;
            let m: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..k).map(|_| (next() % 7) as i64 - 3).collect())
                .collect();
            let b: Vec<i64> = (0..k).map(|_| (next() % 7) as i64 - 3).collect();
            let v = VectorInstance::new(m, b).unwrap();
            assert_eq!(
                oracle_count_vector(&v).unwrap(),
                oracle_count(&scalarize(&v).unwrap()).unwrap(),
                "{v:?}"
            );
        }
    }

    #[test]
    fn vector_decide_examples() {
        let v = vinst(&[&[1, 0], &[0, 1]], &[1, 1]);
        assert!(vector_decide(&v, Method::Scalarize).unwrap());
        assert!(vector_decide(&v, Method::Multivariate).unwrap());

        let v = vinst(&[&[1, 1]], &[1, 0]);
        assert!(!vector_decide(&v, Method::Scalarize).unwrap());
        assert!(!vector_decide(&v, Method::Multivariate).unwrap());

        let v = vinst(&[], &[0, 0]);
        assert!(vector_decide(&v, Method::Scalarize).unwrap());
        assert!(vector_decide(&v, Method::Multivariate).unwrap());
    }

    #[test]
    fn vector_count_examples() {
        let v = vinst(&[&[1, 0], &[0, 1]], &[1, 1]);
        assert_eq!(vector_count_mod_p(&v, 7).unwrap().value, 1);
        let v = vinst(&[&[1, 1]], &[1, 0]);
        assert_eq!(vector_count_mod_p(&v, 5).unwrap().value, 0);
        let v = vinst(&[], &[0, 0]);
        assert_eq!(vector_count_mod_p(&v, 3).unwrap().value, 1);
    }

    #[test]
    fn vector_count_matches_oracle_odd_k() {
        let v = vinst(&[&[1, 0, -1], &[0, 1, 1]], &[1, 1, 0]); // C_vec = 7
        let a = oracle_count_vector(&v).unwrap();
        for p in [11u64, 13, 17] {
            let r = vector_count_mod_p(&v, p).unwrap();
            assert_eq!(num_bigint::BigUint::from(r.value), &a % p);
        }
    }

    #[test]
    fn knapsack_examples() {
        let k = KnapsackInstance::new(vec![2, 3, 4], vec![3, 4, 5], 6).unwrap();
        let r = knapsack_optimize(&k).unwrap();
        assert_eq!((r.value, r.subset.clone()), (8, vec![1, 3]));

        let k = KnapsackInstance::new(vec![], vec![], 0).unwrap();
        let r = knapsack_optimize(&k).unwrap();
        assert_eq!((r.value, r.subset), (0, vec![]));

        let k = KnapsackInstance::new(vec![1], vec![1], -1).unwrap();
        assert_eq!(knapsack_optimize(&k), Err(Error::NoFeasibleSubset));
    }

    #[test]
    fn knapsack_matches_oracle() {
        let mut state = 0x6a09e667f3bcc909u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..25 {
            let n = (next() % 5) as usize;
            let w: Vec<i64> = (0..n).map(|_| (next() % 7) as i64 - 2).collect();
            let v: Vec<i64> = (0..n).map(|_| (next() % 7) as i64 - 2).collect();
            let b = (next() % 9) as i64 - 2;
            let k = KnapsackInstance::new(w, v, b).unwrap();
            assert_eq!(knapsack_optimize(&k), oracle_knapsack(&k), "{k:?}");
        }
    }
}
