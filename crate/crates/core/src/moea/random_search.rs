//! Random search baseline: budget-many uniform masks, keeping the
//! non-dominated set.

use std::time::Instant;

use rand::SeedableRng;

use crate::error::Error;
use crate::instance::Instance;
use crate::moea::{Algorithm, AlgorithmConfig, FrontMember, FrontSet, RunResult};
use crate::objectives::{dominates, evaluate_with, repair, SelectionMask};
use crate::scalar::Real;
use crate::Rng;

/// Draw `evaluation_budget` masks uniformly (independent fair coin per bit,
/// repaired if empty), evaluate each, and return the non-dominated set.
pub fn random_search_run<S: Real>(
    instance: &Instance<S>,
    config: &AlgorithmConfig,
) -> Result<RunResult<S>, Error> {
    config.validate()?;
    let start = Instant::now();
    let mut rng = Rng::seed_from_u64(config.seed);

    let mut archive: Vec<FrontMember<S>> = Vec::new();
    for _ in 0..config.evaluation_budget {
        let mask = repair(SelectionMask::random(instance.n(), &mut rng), &mut rng);
        let objectives = evaluate_with(&mask, instance, config.aggregation)?;
        let candidate = FrontMember { mask, objectives };
        if archive
            .iter()
            .any(|m| dominates(&m.objectives, &candidate.objectives) || m.objectives == candidate.objectives)
        {
            continue;
        }
        archive.retain(|m| !dominates(&candidate.objectives, &m.objectives));
        archive.push(candidate);
    }

    Ok(RunResult {
        algorithm: Algorithm::Random,
        run_index: 0,
        seed: config.seed,
        front: FrontSet::from_members(archive),
        evaluations: config.evaluation_budget,
        duration: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, GeneratorConfig};

    fn small_instance() -> Instance<f64> {
        generate_instance(&GeneratorConfig {
            n_miners: 8,
            n_blocks: 200,
            seed: 5,
            ..GeneratorConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn budget_one_returns_the_single_sample() {
        let inst = small_instance();
        let cfg = AlgorithmConfig {
            population_size: 1,
            evaluation_budget: 1,
            seed: 3,
            ..AlgorithmConfig::default()
        };
        let result = random_search_run(&inst, &cfg).unwrap();
        assert_eq!(result.front.len(), 1);
        assert_eq!(result.evaluations, 1);
    }

    #[test]
    fn output_is_internally_nondominated_for_any_seed() {
        let inst = small_instance();
        for seed in 0..10 {
            let cfg = AlgorithmConfig {
                evaluation_budget: 500,
                seed,
                ..AlgorithmConfig::default()
            };
            let result = random_search_run(&inst, &cfg).unwrap();
            assert!(FrontSet::is_internally_nondominated(result.front.members()));
        }
    }

    #[test]
    fn identical_seeds_reproduce_identical_fronts() {
        let inst = small_instance();
        let cfg = AlgorithmConfig {
            evaluation_budget: 300,
            seed: 7,
            ..AlgorithmConfig::default()
        };
        let a = random_search_run(&inst, &cfg).unwrap();
        let b = random_search_run(&inst, &cfg).unwrap();
        assert_eq!(a.front, b.front);
    }
}
