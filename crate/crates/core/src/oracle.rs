//! Brute-force ground truth: dynamic programming and subset enumeration.
//!
//! Deliberately shares no modular arithmetic with the character-sum pipeline
//! so the two can only agree by being right.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{Instance, KnapsackInstance, VectorInstance};
use crate::vector::KnapsackResult;

const MAX_ENUM_N: usize = 20;
const MAX_DP_SPAN: u64 = 10_000;

/// Exact solution count by an offset-indexed dynamic program over all
/// achievable sums, with arbitrary-precision cell counts.
pub fn oracle_count(instance: &Instance) -> Result<BigUint> {
    let n = instance.n();
    let span: u64 = instance.m.iter().map(|&v| v.unsigned_abs()).sum();
    if n > 24 && span > MAX_DP_SPAN {
        return Err(Error::TooLarge);
    }
    if instance.b.unsigned_abs() > span {
        return Ok(BigUint::zero());
    }
    let width = (2 * span + 1) as usize;
    let offset = span as i64;
    let mut table = vec![BigUint::zero(); width];
    table[offset as usize] = BigUint::one();
    for &mi in &instance.m {
        if mi >= 0 {
            for idx in (0..width).rev() {
                let from = idx as i64 - mi;
                if from >= 0 && !table[from as usize].is_zero() {
                    let add = table[from as usize].clone();
                    table[idx] += add;
                }
            }
        } else {
            for idx in 0..width {
                let from = idx as i64 - mi;
                if from < width as i64 && !table[from as usize].is_zero() {
                    let add = table[from as usize].clone();
                    table[idx] += add;
                }
            }
        }
    }
    Ok(table[(instance.b + offset) as usize].clone())
}

/// Number of DP table cells `oracle_count` allocates; used to contrast its
/// linear-in-C footprint with the metered decider.
pub fn oracle_table_cells(instance: &Instance) -> u64 {
    let span: u64 = instance.m.iter().map(|&v| v.unsigned_abs()).sum();
    2 * span + 1
}

/// Exact solution count by subset enumeration (n <= 20).
pub fn oracle_count_enum(instance: &Instance) -> Result<BigUint> {
    let n = instance.n();
    if n > MAX_ENUM_N {
        return Err(Error::TooLarge);
    }
    let mut count: u64 = 0;
    for mask in 0..1u64 << n {
        let sum: i64 = instance
            .m
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .sum();
        if sum == instance.b {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// All solutions as 1-based index sets, in lexicographic order.
pub fn oracle_solutions(instance: &Instance) -> Result<Vec<Vec<usize>>> {
    let n = instance.n();
    if n > MAX_ENUM_N {
        return Err(Error::TooLarge);
    }
    let mut out = Vec::new();
    for mask in 0..1u64 << n {
        let mut sum = 0i64;
        let mut subset = Vec::new();
        for (i, &v) in instance.m.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sum += v;
                subset.push(i + 1);
            }
        }
        if sum == instance.b {
            out.push(subset);
        }
    }
    out.sort();
    Ok(out)
}

/// Exact vector solution count by enumeration with componentwise sums.
pub fn oracle_count_vector(vinstance: &VectorInstance) -> Result<BigUint> {
    let n = vinstance.n();
    if n > MAX_ENUM_N {
        return Err(Error::TooLarge);
    }
    let k = vinstance.k();
    let mut count: u64 = 0;
    for mask in 0..1u64 << n {
        let mut sums = vec![0i64; k];
        for (i, row) in vinstance.m.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (j, &v) in row.iter().enumerate() {
                    sums[j] += v;
                }
            }
        }
        if sums == vinstance.b {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// Exhaustive knapsack optimum with the production tie-break: maximal value,
/// then minimal weight, then lexicographically smallest witness.
pub fn oracle_knapsack(kinstance: &KnapsackInstance) -> Result<KnapsackResult> {
    let n = kinstance.n();
    if n > MAX_ENUM_N {
        return Err(Error::TooLarge);
    }
    let mut best: Option<(i64, i64, Vec<usize>)> = None;
    for mask in 0..1u64 << n {
        let mut w = 0i64;
        let mut v = 0i64;
        let mut subset = Vec::new();
        for i in 0..n {
            if mask >> i & 1 == 1 {
                w += kinstance.w[i];
                v += kinstance.v[i];
                subset.push(i + 1);
            }
        }
        if w > kinstance.b {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bv, bw, bs)) => {
                (v, -w) > (*bv, -*bw) || ((v, w) == (*bv, *bw) && subset < *bs)
            }
        };
        if better {
            best = Some((v, w, subset));
        }
    }
    match best {
        Some((value, _, subset)) => Ok(KnapsackResult { value, subset }),
        None => Err(Error::NoFeasibleSubset),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(m: &[i64], b: i64) -> Instance {
        Instance::new(m.to_vec(), b)
    }

    #[test]
    fn count_examples() {
        assert_eq!(oracle_count(&inst(&[1, 2, 3], 3)).unwrap(), 2u32.into());
        assert_eq!(oracle_count(&inst(&[0, 0], 0)).unwrap(), 4u32.into());
        assert_eq!(oracle_count(&inst(&[-1, 2], 1)).unwrap(), 1u32.into());
        assert_eq!(oracle_count(&inst(&[], 0)).unwrap(), 1u32.into());
        assert_eq!(oracle_count(&inst(&[1], 2)).unwrap(), 0u32.into());
    }

    #[test]
    fn dp_and_enumeration_agree() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..300 {
            let n = (next() % 9) as usize;
            let m: Vec<i64> = (0..n).map(|_| (next() % 13) as i64 - 6).collect();
            let b = (next() % 21) as i64 - 10;
            let i = Instance::new(m, b);
            assert_eq!(oracle_count(&i).unwrap(), oracle_count_enum(&i).unwrap());
        }
    }

    #[test]
    fn solutions_examples() {
        assert_eq!(
            oracle_solutions(&inst(&[1, 2, 3], 3)).unwrap(),
            vec![vec![1, 2], vec![3]]
        );
        assert_eq!(oracle_solutions(&inst(&[], 0)).unwrap(), vec![Vec::<usize>::new()]);
        assert!(oracle_solutions(&inst(&[1], 2)).unwrap().is_empty());
    }

    #[test]
    fn vector_count_examples() {
        let v = VectorInstance::new(vec![vec![1, 0], vec![0, 1]], vec![1, 1]).unwrap();
        assert_eq!(oracle_count_vector(&v).unwrap(), 1u32.into());
        let v = VectorInstance::new(vec![], vec![0, 0]).unwrap();
        assert_eq!(oracle_count_vector(&v).unwrap(), 1u32.into());
        let v = VectorInstance::new(vec![vec![1, 1]], vec![1, 0]).unwrap();
        assert_eq!(oracle_count_vector(&v).unwrap(), 0u32.into());
    }

    #[test]
    fn knapsack_examples() {
        let k = KnapsackInstance::new(vec![2, 3, 4], vec![3, 4, 5], 6).unwrap();
        let r = oracle_knapsack(&k).unwrap();
        assert_eq!(r.value, 8);
        assert_eq!(r.subset, vec![1, 3]);

        let k = KnapsackInstance::new(vec![], vec![], 0).unwrap();
        let r = oracle_knapsack(&k).unwrap();
        assert_eq!((r.value, r.subset.len()), (0, 0));

        let k = KnapsackInstance::new(vec![1], vec![1], -1).unwrap();
        assert_eq!(oracle_knapsack(&k), Err(Error::NoFeasibleSubset));
    }
}
