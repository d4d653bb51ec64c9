//! Enumeration policies for the mode subsets `J` entering the bounds.
//!
//! Every bound is a minimum over admissible subsets `1 <= |J| <= floor(n/2)`;
//! any single `J` already yields a valid inequality, so non-exhaustive
//! policies stay sound; they report the minimum over the subsets
//! examined.

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::gaussian::SignedModeMask;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetPolicy {
    /// All subsets with `1 <= |J| <= floor(n/2)`, for `n <= n_exhaustive`.
    Exhaustive,
    /// The alternating ansatz: every other mode starting from the first.
    Alternating,
    /// `count` subsets drawn with a seeded generator (deduplicated).
    Random { count: usize, seed: u64 },
    /// Caller-supplied index sets.
    Explicit(Vec<Vec<usize>>),
}

/// Materialise the subsets for `n` modes, in lexicographic index order.
///
/// Errors with `EmptySubsetPolicy` when nothing admissible results (e.g.
/// `n < 2`), and refuses `Exhaustive` beyond `n_exhaustive` modes to keep the
/// `2^(n-1)` blow-up explicit.
pub fn admissible_subsets(
    n: usize,
    policy: &SubsetPolicy,
    n_exhaustive: usize,
) -> Result<Vec<SignedModeMask>> {
    let half = n / 2;
    if n < 2 || half == 0 {
        return Err(Error::EmptySubsetPolicy(n));
    }
    let mut index_sets: Vec<Vec<usize>> = match policy {
        SubsetPolicy::Exhaustive => {
            if n > n_exhaustive {
                return Err(Error::Domain(format!(
                    "exhaustive subset enumeration capped at {n_exhaustive} modes (requested {n}); \
                     use the alternating or random policy"
                )));
            }
            let mut sets = Vec::new();
            for mask in 1u64..(1u64 << n) {
                let size = mask.count_ones() as usize;
                if size >= 1 && size <= half {
                    sets.push((0..n).filter(|&j| mask >> j & 1 == 1).collect());
                }
            }
            sets
        }
        SubsetPolicy::Alternating => {
            let evens: Vec<usize> = (0..n).step_by(2).collect();
            if evens.len() <= half {
                vec![evens]
            } else {
                // odd n: the complement (every other mode from the second)
                vec![(1..n).step_by(2).collect()]
            }
        }
        SubsetPolicy::Random { count, seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(*seed);
            let mut sets = Vec::with_capacity(*count);
            let mut all: Vec<usize> = (0..n).collect();
            for _ in 0..*count {
                let size = 1 + rng.random_range(0..half);
                all.shuffle(&mut rng);
                let mut set: Vec<usize> = all[..size].to_vec();
                set.sort_unstable();
                sets.push(set);
            }
            sets
        }
        SubsetPolicy::Explicit(sets) => sets.clone(),
    };

    index_sets.sort();
    index_sets.dedup();

    let mut masks = Vec::with_capacity(index_sets.len());
    for set in index_sets {
        let mask = SignedModeMask::from_indices(n, &set)?;
        let size = mask.len();
        if size == 0 || size > half {
            return Err(Error::Domain(format!(
                "subset {:?} has size {size}, admissible sizes are 1..={half}",
                mask.indices()
            )));
        }
        masks.push(mask);
    }
    if masks.is_empty() {
        return Err(Error::EmptySubsetPolicy(n));
    }
    Ok(masks)
}

/// Total order used for the deterministic (value, subset) min-reduction:
/// smaller value wins, ties go to the lexicographically smallest index set.
pub fn better(candidate: &(f64, Vec<usize>), incumbent: &(f64, Vec<usize>)) -> bool {
    match candidate.0.partial_cmp(&incumbent.0) {
        Some(std::cmp::Ordering::Less) => true,
        Some(std::cmp::Ordering::Equal) => candidate.1 < incumbent.1,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_counts() {
        // n = 4: subsets of size 1 and 2: C(4,1) + C(4,2) = 10
        let subs = admissible_subsets(4, &SubsetPolicy::Exhaustive, 20).unwrap();
        assert_eq!(subs.len(), 10);
        // lexicographic order starts at {0}
        assert_eq!(subs[0].indices(), vec![0]);
        assert_eq!(subs[1].indices(), vec![0, 1]);
    }

    #[test]
    fn alternating_is_admissible() {
        let subs = admissible_subsets(4, &SubsetPolicy::Alternating, 20).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].indices(), vec![0, 2]);
        let subs = admissible_subsets(5, &SubsetPolicy::Alternating, 20).unwrap();
        assert_eq!(subs[0].indices(), vec![1, 3]);
    }

    #[test]
    fn random_policy_is_reproducible() {
        let p = SubsetPolicy::Random { count: 8, seed: 3 };
        let a = admissible_subsets(9, &p, 20).unwrap();
        let b = admissible_subsets(9, &p, 20).unwrap();
        let ai: Vec<_> = a.iter().map(|m| m.indices()).collect();
        let bi: Vec<_> = b.iter().map(|m| m.indices()).collect();
        assert_eq!(ai, bi);
    }

    #[test]
    fn single_mode_has_no_subsets() {
        assert!(matches!(
            admissible_subsets(1, &SubsetPolicy::Exhaustive, 20),
            Err(Error::EmptySubsetPolicy(1))
        ));
    }

    #[test]
    fn oversized_explicit_subset_rejected() {
        let p = SubsetPolicy::Explicit(vec![vec![0, 1, 2]]);
        assert!(admissible_subsets(4, &p, 20).is_err());
    }
}
