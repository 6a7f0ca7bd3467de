//! Variation operators shared by both EAs: one-point crossover, per-bit flip
//! mutation and binary tournament selection.

use std::cmp::Ordering;

use crate::objectives::{repair, SelectionMask};

/// One-point crossover: a cut point uniform in `1..n-1`, children swap
/// suffixes. Masks of length 1 have no interior cut point and are cloned.
pub fn one_point_crossover<R: rand::Rng>(
    a: &SelectionMask,
    b: &SelectionMask,
    rng: &mut R,
) -> (SelectionMask, SelectionMask) {
    assert_eq!(a.len(), b.len(), "parents must have equal length");
    let n = a.len();
    if n < 2 {
        return (a.clone(), b.clone());
    }
    let cut = rng.random_range(1..n);
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    for i in cut..n {
        c1.set(i, b.get(i));
        c2.set(i, a.get(i));
    }
    (c1, c2)
}

/// Flip each bit independently with probability `rate`, then repair if the
/// flips emptied the mask.
pub fn bitflip_mutation<R: rand::Rng>(
    mut mask: SelectionMask,
    rate: f64,
    rng: &mut R,
) -> SelectionMask {
    for i in 0..mask.len() {
        if rng.random::<f64>() < rate {
            mask.flip(i);
        }
    }
    repair(mask, rng)
}

/// Binary tournament: draw two uniformly with replacement, return the one the
/// comparator ranks better (`Ordering::Less` = first argument better); on a
/// tie the first drawn wins.
pub fn binary_tournament<'a, T, R: rand::Rng>(
    pool: &'a [T],
    better: impl Fn(&T, &T) -> Ordering,
    rng: &mut R,
) -> &'a T {
    let a = &pool[rng.random_range(0..pool.len())];
    let b = &pool[rng.random_range(0..pool.len())];
    match better(a, b) {
        Ordering::Greater => b,
        _ => a,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn crossover_of_identical_parents_is_identity() {
        let mut rng = crate::Rng::seed_from_u64(1);
        let p = SelectionMask::from_bitstring("10110100").unwrap();
        let (c1, c2) = one_point_crossover(&p, &p, &mut rng);
        assert_eq!(c1, p);
        assert_eq!(c2, p);
    }

    #[test]
    fn crossover_children_swap_suffixes() {
        let a = SelectionMask::from_bitstring("11110000").unwrap();
        let b = SelectionMask::from_bitstring("00001111").unwrap();
        for seed in 0..20 {
            let mut rng = crate::Rng::seed_from_u64(seed);
            let (c1, c2) = one_point_crossover(&a, &b, &mut rng);
            // Each position comes from one parent in each child, complementary.
            for i in 0..a.len() {
                assert!(c1.get(i) == a.get(i) || c1.get(i) == b.get(i));
                assert_eq!(c1.get(i) == a.get(i), c2.get(i) == b.get(i));
            }
        }
    }

    #[test]
    fn mutation_rate_zero_is_identity() {
        let mut rng = crate::Rng::seed_from_u64(2);
        let m = SelectionMask::from_bitstring("1010").unwrap();
        assert_eq!(bitflip_mutation(m.clone(), 0.0, &mut rng), m);
    }

    #[test]
    fn mutation_rate_one_complements() {
        let mut rng = crate::Rng::seed_from_u64(3);
        let m = SelectionMask::from_bitstring("1010").unwrap();
        assert_eq!(
            bitflip_mutation(m, 1.0, &mut rng),
            SelectionMask::from_bitstring("0101").unwrap()
        );
    }

    #[test]
    fn mutation_of_full_mask_at_rate_one_gets_repaired() {
        let mut rng = crate::Rng::seed_from_u64(4);
        let m = SelectionMask::from_bitstring("1111").unwrap();
        let out = bitflip_mutation(m, 1.0, &mut rng);
        assert_eq!(out.popcount(), 1);
    }

    #[test]
    fn empirical_flip_frequency_matches_rate() {
        let n = 64usize;
        let rate = 1.0 / n as f64;
        let trials = 100_000usize;
        let mut rng = crate::Rng::seed_from_u64(5);
        let base = SelectionMask::from_bits(vec![true; n]);
        let mut flips = 0u64;
        for _ in 0..trials {
            let out = bitflip_mutation(base.clone(), rate, &mut rng);
            flips += (n - out.popcount()) as u64;
        }
        // Repair never fires here (flipping a full 64-bit mask empty at rate
        // 1/64 is astronomically unlikely), so flips are pure Bernoulli.
        let total_bits = (n * trials) as f64;
        let observed = flips as f64 / total_bits;
        let se = (rate * (1.0 - rate) / total_bits).sqrt();
        assert!(
            (observed - rate).abs() <= 3.0 * se,
            "observed {observed}, expected {rate} +- {}",
            3.0 * se
        );
    }

    #[test]
    fn tournament_prefers_better_and_breaks_ties_first() {
        let pool = vec![3, 1, 2];
        let mut rng = crate::Rng::seed_from_u64(6);
        for _ in 0..100 {
            let winner = *binary_tournament(&pool, |a, b| a.cmp(b), &mut rng);
            assert!(pool.contains(&winner));
        }
        // Tie case: all equal, winner is always the first drawn (trivially any).
        let ties = vec![7, 7];
        let w = *binary_tournament(&ties, |a, b| a.cmp(b), &mut rng);
        assert_eq!(w, 7);
    }
}
