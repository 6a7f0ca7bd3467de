//! Run-loop contracts for the three solvers: budget accounting, determinism,
//! degenerate budgets and recovery of exhaustively known Pareto fronts.

use miner_select::instance::{generate_instance, GeneratorConfig};
use miner_select::moea::{
    nsga2_run, random_search_run, spea2_run, Algorithm, AlgorithmConfig, FrontSet,
};
use miner_select::objectives::{dominates, evaluate, SelectionMask};
use miner_select::{Instance, ObjectiveVector};

fn instance(n_miners: usize, seed: u64) -> Instance {
    generate_instance(&GeneratorConfig {
        n_miners,
        n_blocks: 500,
        seed,
        ..GeneratorConfig::default()
    })
    .unwrap()
}

/// Exhaustive Pareto front over all non-empty subsets; only viable for small n.
fn exact_front(inst: &Instance) -> Vec<ObjectiveVector> {
    let n = inst.n();
    assert!(n <= 16);
    let all: Vec<ObjectiveVector> = (1u32..1 << n)
        .map(|bits| {
            let mask = SelectionMask::from_bits((0..n).map(|i| bits >> i & 1 == 1).collect());
            evaluate(&mask, inst).unwrap()
        })
        .collect();
    let mut front: Vec<ObjectiveVector> = all
        .iter()
        .copied()
        .filter(|v| !all.iter().any(|o| dominates(o, v)))
        .collect();
    front.sort_by(|a, b| {
        a.energy_kwh
            .partial_cmp(&b.energy_kwh)
            .unwrap()
            .then(a.reputation.partial_cmp(&b.reputation).unwrap())
    });
    front.dedup_by(|a, b| a == b);
    front
}

fn recovery_rate(front: &FrontSet<f64>, exact: &[ObjectiveVector]) -> f64 {
    let hits = exact
        .iter()
        .filter(|t| {
            front.members().iter().any(|m| {
                (m.objectives.energy_kwh - t.energy_kwh).abs() < 1e-9
                    && (m.objectives.reputation - t.reputation).abs() < 1e-9
            })
        })
        .count();
    hits as f64 / exact.len() as f64
}

#[test]
fn budget_equal_to_population_returns_initial_front() {
    let inst = instance(10, 1);
    let cfg = AlgorithmConfig {
        population_size: 30,
        archive_size: 30,
        evaluation_budget: 30,
        seed: 5,
        ..AlgorithmConfig::default()
    };
    let nsga2 = nsga2_run(&inst, &cfg).unwrap();
    let spea2 = spea2_run(&inst, &cfg).unwrap();
    assert_eq!(nsga2.evaluations, 30);
    assert_eq!(spea2.evaluations, 30);
    // Both algorithms share the initialization path, so with no generations
    // possible they reduce to the same non-dominated subset of the same
    // random initial population.
    assert_eq!(nsga2.front, spea2.front);
    assert!(FrontSet::is_internally_nondominated(nsga2.front.members()));
}

#[test]
fn budget_below_population_is_a_config_error() {
    let inst = instance(10, 1);
    let cfg = AlgorithmConfig {
        population_size: 50,
        evaluation_budget: 49,
        ..AlgorithmConfig::default()
    };
    assert!(nsga2_run(&inst, &cfg).is_err());
    assert!(spea2_run(&inst, &cfg).is_err());
}

#[test]
fn evaluations_stay_within_the_budget_window() {
    let inst = instance(10, 2);
    for budget in [100, 250, 333, 1000] {
        let cfg = AlgorithmConfig {
            population_size: 100,
            archive_size: 100,
            evaluation_budget: budget,
            seed: 1,
            ..AlgorithmConfig::default()
        };
        for result in [nsga2_run(&inst, &cfg).unwrap(), spea2_run(&inst, &cfg).unwrap()] {
            assert!(result.evaluations <= budget);
            assert!(result.evaluations >= budget - 100);
        }
        let rs = random_search_run(&inst, &cfg).unwrap();
        assert_eq!(rs.evaluations, budget);
    }
}

#[test]
fn identical_seeds_give_identical_results() {
    let inst = instance(16, 3);
    let cfg = AlgorithmConfig {
        evaluation_budget: 2_000,
        seed: 99,
        ..AlgorithmConfig::default()
    };
    for algorithm in Algorithm::ALL {
        let a = miner_select::moea::run(algorithm, &inst, &cfg).unwrap();
        let b = miner_select::moea::run(algorithm, &inst, &cfg).unwrap();
        assert_eq!(a.front, b.front, "{algorithm} not deterministic");
        assert_eq!(a.evaluations, b.evaluations);
    }
}

#[test]
fn run_fronts_are_nondominated_and_deduplicated() {
    let inst = instance(16, 4);
    let cfg = AlgorithmConfig {
        evaluation_budget: 1_500,
        seed: 12,
        ..AlgorithmConfig::default()
    };
    for algorithm in Algorithm::ALL {
        let result = miner_select::moea::run(algorithm, &inst, &cfg).unwrap();
        assert!(
            FrontSet::is_internally_nondominated(result.front.members()),
            "{algorithm}"
        );
    }
}

#[test]
fn elitism_keeps_the_front_growing_with_budget() {
    let inst = instance(12, 7);
    let exact = exact_front(&inst);
    let mut last = 0.0;
    for budget in [200, 1_000, 5_000, 10_000] {
        let cfg = AlgorithmConfig {
            evaluation_budget: budget,
            seed: 4,
            ..AlgorithmConfig::default()
        };
        let result = nsga2_run(&inst, &cfg).unwrap();
        let rate = recovery_rate(&result.front, &exact);
        assert!(
            rate >= last - 1e-9,
            "recovery dropped from {last} to {rate} at budget {budget}"
        );
        last = rate;
    }
}

#[test]
fn both_eas_recover_small_exact_fronts() {
    let inst = instance(12, 8);
    let exact = exact_front(&inst);
    assert!(!exact.is_empty());
    for seed in 0..5 {
        let cfg = AlgorithmConfig {
            evaluation_budget: 10_000,
            seed,
            ..AlgorithmConfig::default()
        };
        for (label, result) in [
            ("nsga2", nsga2_run(&inst, &cfg).unwrap()),
            ("spea2", spea2_run(&inst, &cfg).unwrap()),
        ] {
            let rate = recovery_rate(&result.front, &exact);
            assert!(rate >= 0.9, "{label} seed {seed} recovered only {rate}");
        }
    }
}
