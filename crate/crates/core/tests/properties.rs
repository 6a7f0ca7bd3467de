//! Fuzzed invariants over the core math: dominance order structure, additive
//! evaluation, order-preserving normalization, sorting against a brute-force
//! peeling oracle, block conservation and hypervolume stability.

use miner_select::instance::{generate_instance, GeneratorConfig};
use miner_select::metrics::{hypervolume_2d, ReferencePoint};
use miner_select::moea::fast_nondominated_sort;
use miner_select::objectives::{dominates, evaluate, normalize, SelectionMask};
use miner_select::{FrontMember, FrontSet, Instance, NormalizedPoint, ObjectiveVector};
use proptest::prelude::*;

fn vector() -> impl Strategy<Value = ObjectiveVector> {
    (0.0..100.0f64, 0.0..100.0f64).prop_map(|(energy_kwh, reputation)| ObjectiveVector {
        energy_kwh,
        reputation,
    })
}

/// Brute-force layered dominance peeling: remove the non-dominated layer,
/// repeat. Independent of the implementation's bookkeeping.
fn peeling_oracle(objectives: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..objectives.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let layer: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| {
                !remaining
                    .iter()
                    .any(|&j| j != i && dominates(&objectives[j], &objectives[i]))
            })
            .collect();
        remaining.retain(|i| !layer.contains(i));
        fronts.push(layer);
    }
    fronts
}

fn small_instance(seed: u64) -> Instance {
    generate_instance(&GeneratorConfig {
        n_miners: 12,
        n_blocks: 300,
        seed,
        ..GeneratorConfig::default()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn dominance_is_irreflexive(a in vector()) {
        prop_assert!(!dominates(&a, &a));
    }

    #[test]
    fn dominance_is_antisymmetric(a in vector(), b in vector()) {
        prop_assert!(!(dominates(&a, &b) && dominates(&b, &a)));
    }

    #[test]
    fn dominance_is_transitive(a in vector(), b in vector(), c in vector()) {
        if dominates(&a, &b) && dominates(&b, &c) {
            prop_assert!(dominates(&a, &c));
        }
    }

    #[test]
    fn sort_matches_peeling_oracle(objs in prop::collection::vec(vector(), 1..100)) {
        let mut fronts = fast_nondominated_sort(&objs);
        let mut oracle = peeling_oracle(&objs);
        for f in fronts.iter_mut().chain(oracle.iter_mut()) {
            f.sort_unstable();
        }
        prop_assert_eq!(fronts, oracle);
    }

    #[test]
    fn evaluation_is_additive_over_disjoint_masks(
        seed in 0u64..50,
        assignment in prop::collection::vec(0u8..3, 12),
    ) {
        let inst = small_instance(seed);
        // 0 = neither, 1 = mask a, 2 = mask b: disjoint by construction.
        let a = SelectionMask::from_bits(assignment.iter().map(|&x| x == 1).collect());
        let b = SelectionMask::from_bits(assignment.iter().map(|&x| x == 2).collect());
        prop_assume!(a.popcount() > 0 && b.popcount() > 0);
        let mut union = a.clone();
        for i in b.selected() {
            union.set(i, true);
        }
        let va = evaluate(&a, &inst).unwrap();
        let vb = evaluate(&b, &inst).unwrap();
        let vu = evaluate(&union, &inst).unwrap();
        prop_assert!((vu.energy_kwh - (va.energy_kwh + vb.energy_kwh)).abs() < 1e-9);
        prop_assert!((vu.reputation - (va.reputation + vb.reputation)).abs() < 1e-9);
    }

    #[test]
    fn adding_a_miner_never_decreases_either_objective(
        seed in 0u64..50,
        bits in prop::collection::vec(any::<bool>(), 12),
        extra in 0usize..12,
    ) {
        let inst = small_instance(seed);
        let mask = SelectionMask::from_bits(bits);
        prop_assume!(mask.popcount() > 0 && !mask.get(extra));
        let mut bigger = mask.clone();
        bigger.set(extra, true);
        let small = evaluate(&mask, &inst).unwrap();
        let big = evaluate(&bigger, &inst).unwrap();
        prop_assert!(big.energy_kwh >= small.energy_kwh);
        prop_assert!(big.reputation >= small.reputation);
    }

    #[test]
    fn normalization_preserves_dominance(a in vector(), b in vector()) {
        // Any instance with positive totals works; the map is affine.
        let inst = small_instance(1);
        let na = normalize(&a, &inst).unwrap();
        let nb = normalize(&b, &inst).unwrap();
        prop_assert_eq!(dominates(&a, &b), na.dominates(&nb));
    }

    #[test]
    fn generator_conserves_total_blocks(
        n_miners in 1usize..20,
        n_blocks in 1u64..500,
        seed in any::<u64>(),
    ) {
        let inst: Instance = generate_instance(&GeneratorConfig {
            n_miners,
            n_blocks,
            seed,
            ..GeneratorConfig::default()
        })
        .unwrap();
        let total: u64 = inst.miners().iter().map(|m| m.blocks_mined).sum();
        prop_assert_eq!(total, n_blocks);
        prop_assert!(inst.warnings().is_empty());
    }

    #[test]
    fn reputation_is_monotone_in_stake_and_blocks(
        seed in 0u64..50,
        which in 0usize..12,
        stake_bump in 0.0..100.0f64,
        block_bump in 0u64..50,
    ) {
        let inst = small_instance(seed);
        let m = &inst.miners()[which];
        let base = miner_select::instance::reputation_score(
            m, inst.max_stake(), inst.max_blocks(), inst.alpha());
        let mut bumped = m.clone();
        bumped.stake += stake_bump;
        bumped.blocks_mined += block_bump;
        let after = miner_select::instance::reputation_score(
            &bumped, inst.max_stake(), inst.max_blocks(), inst.alpha());
        prop_assert!(after >= base);
    }

    #[test]
    fn front_sets_are_internally_nondominated(objs in prop::collection::vec(vector(), 0..60)) {
        let members: Vec<FrontMember> = objs
            .iter()
            .map(|&objectives| FrontMember {
                mask: SelectionMask::from_bits(vec![true]),
                objectives,
            })
            .collect();
        let front = FrontSet::from_members(members);
        prop_assert!(FrontSet::is_internally_nondominated(front.members()));
    }

    #[test]
    fn dominated_points_never_change_hypervolume(
        points in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 1..40),
        extra_shift in (0.0..0.5f64, 0.0..0.5f64),
    ) {
        let pts: Vec<NormalizedPoint> = points
            .iter()
            .map(|&(f1, f2)| NormalizedPoint { f1, f2 })
            .collect();
        let reference = ReferencePoint::default();
        let base = hypervolume_2d(&pts, &reference);
        // Shift a copy of the first point towards the reference: dominated.
        let mut noisy = pts.clone();
        noisy.push(NormalizedPoint {
            f1: (pts[0].f1 + extra_shift.0).min(1.0),
            f2: (pts[0].f2 + extra_shift.1).min(1.0),
        });
        let with_dominated = hypervolume_2d(&noisy, &reference);
        prop_assert!((with_dominated - base).abs() < 1e-12);
    }

    #[test]
    fn hypervolume_is_monotone_under_union(
        a in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 1..30),
        b in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 1..30),
    ) {
        let to_points = |v: &[(f64, f64)]| -> Vec<NormalizedPoint> {
            v.iter().map(|&(f1, f2)| NormalizedPoint { f1, f2 }).collect()
        };
        let reference = ReferencePoint::default();
        let pa = to_points(&a);
        let mut both = pa.clone();
        both.extend(to_points(&b));
        prop_assert!(hypervolume_2d(&both, &reference) >= hypervolume_2d(&pa, &reference) - 1e-12);
    }
}
