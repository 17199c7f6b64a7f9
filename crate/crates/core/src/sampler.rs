//! Uniform solution sampling by sequential conditional counting: fix each
//! element in index order with probability proportional to the number of
//! completions that include it.

use num_bigint::BigUint;
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::counting::count_exact;
use crate::decider::decide;
use crate::error::{Error, Result};
use crate::model::Instance;

/// Draws one solution uniformly at random, deterministically in the seed.
pub fn sample_solution(instance: &Instance, seed: u64) -> Result<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with_rng(instance, &mut rng)
}

/// Draws one solution using an already-running generator; `--samples n`
/// consumes n draws from a single stream.
pub fn sample_with_rng(instance: &Instance, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let (feasible, _) = decide(instance)?;
    if !feasible {
        return Err(Error::NoSolution);
    }
    let n = instance.n();
    let mut subset = Vec::new();
    let mut target = instance.b;
    for i in 0..n {
        let tail = instance.m[i + 1..].to_vec();
        let a_in = count_exact(&Instance::new(tail.clone(), target - instance.m[i]))?;
        let a_out = count_exact(&Instance::new(tail, target))?;
        let total = &a_in + &a_out;
        if total.is_zero() {
            return Err(Error::Internal(
                "no completion consistent with choices so far".into(),
            ));
        }
        // include with probability a_in / total: compare a 64-bit draw
        // against the exact rational threshold by cross-multiplication
        let r = rng.next_u64();
        if BigUint::from(r) * total < (a_in << 64u32) {
            subset.push(i + 1);
            target -= instance.m[i];
        }
    }
    if target != 0 {
        return Err(Error::Internal("sampled subset misses the target".into()));
    }
    Ok(subset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn unique_solution_instances() {
        let i = Instance::new(vec![5], 5);
        for seed in 0..20 {
            assert_eq!(sample_solution(&i, seed).unwrap(), vec![1]);
        }
        let i = Instance::new(vec![], 0);
        assert_eq!(sample_solution(&i, 7).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn infeasible_instance_errors() {
        let i = Instance::new(vec![1], 2);
        assert_eq!(sample_solution(&i, 0), Err(Error::NoSolution));
    }

    #[test]
    fn identical_seeds_identical_subsets() {
        let i = Instance::new(vec![1, 2, 3, -1], 3);
        for seed in 0..10 {
            assert_eq!(
                sample_solution(&i, seed).unwrap(),
                sample_solution(&i, seed).unwrap()
            );
        }
    }

    #[test]
    fn samples_are_solutions_and_roughly_uniform() {
        let i = Instance::new(vec![1, 2, 3], 3);
        let mut freq: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let draws = 2000;
        for _ in 0..draws {
            let s = sample_with_rng(&i, &mut rng).unwrap();
            let sum: i64 = s.iter().map(|&ix| i.m[ix - 1]).sum();
            assert_eq!(sum, i.b);
            *freq.entry(s).or_default() += 1;
        }
        assert_eq!(freq.len(), 2); // {1,2} and {3}
        for &c in freq.values() {
            let f = f64::from(c) / f64::from(draws);
            assert!((0.45..=0.55).contains(&f), "frequency {f}");
        }
    }
}
