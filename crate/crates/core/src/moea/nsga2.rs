//! NSGA-II: fast non-dominated sorting, crowding distance and the elitist
//! generational loop.

use std::cmp::Ordering;
use std::time::Instant;

use rand::SeedableRng;

use crate::error::Error;
use crate::instance::Instance;
use crate::moea::variation::{binary_tournament, bitflip_mutation, one_point_crossover};
use crate::moea::{Algorithm, AlgorithmConfig, FrontMember, FrontSet, Individual, RunResult};
use crate::objectives::{dominates, evaluate_with, repair, ObjectiveVector, SelectionMask};
use crate::scalar::Real;
use crate::Rng;

/// Partition a population into fronts: front 0 is the non-dominated subset,
/// front k the subset only dominated by earlier fronts. Deb's O(MN²) scheme.
pub fn fast_nondominated_sort<S: Real>(objectives: &[ObjectiveVector<S>]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && dominates(&objectives[i], &objectives[j]) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            }
        }
    }
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Crowding distance within one front. Per objective the two extreme members
/// get +infinity and interior members accumulate the normalized gap between
/// their neighbours; an objective with zero range contributes nothing.
pub fn crowding_distance<S: Real>(front: &[ObjectiveVector<S>]) -> Vec<S> {
    let m = front.len();
    let mut distance = vec![S::zero(); m];
    if m <= 2 {
        return vec![S::infinity(); m];
    }
    let keys: [fn(&ObjectiveVector<S>) -> S; 2] =
        [|v| v.energy_kwh, |v| v.reputation];
    for key in keys {
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| key(&front[a]).partial_cmp(&key(&front[b])).unwrap());
        let lo = key(&front[order[0]]);
        let hi = key(&front[order[m - 1]]);
        distance[order[0]] = S::infinity();
        distance[order[m - 1]] = S::infinity();
        let range = hi - lo;
        if range > S::zero() {
            for w in 1..m - 1 {
                let gap = key(&front[order[w + 1]]) - key(&front[order[w - 1]]);
                distance[order[w]] = distance[order[w]] + gap / range;
            }
        }
    }
    distance
}

/// Recompute rank and crowding for every individual in place.
pub(crate) fn assign_rank_and_crowding<S: Real>(pop: &mut [Individual<S>]) {
    let objectives: Vec<ObjectiveVector<S>> = pop.iter().map(|ind| ind.objectives).collect();
    for (rank, front) in fast_nondominated_sort(&objectives).into_iter().enumerate() {
        let front_objs: Vec<ObjectiveVector<S>> =
            front.iter().map(|&i| objectives[i]).collect();
        let crowd = crowding_distance(&front_objs);
        for (&i, c) in front.iter().zip(crowd) {
            pop[i].rank = rank;
            pop[i].crowding = c;
        }
    }
}

/// NSGA-II's survival comparator: lower rank first, then larger crowding.
fn rank_crowding_order<S: Real>(a: &Individual<S>, b: &Individual<S>) -> Ordering {
    a.rank
        .cmp(&b.rank)
        .then_with(|| b.crowding.partial_cmp(&a.crowding).unwrap())
}

pub(crate) fn random_initial_population<S: Real>(
    instance: &Instance<S>,
    config: &AlgorithmConfig,
    rng: &mut Rng,
) -> Result<Vec<Individual<S>>, Error> {
    (0..config.population_size)
        .map(|_| {
            let mask = repair(SelectionMask::random(instance.n(), rng), rng);
            let objectives = evaluate_with(&mask, instance, config.aggregation)?;
            Ok(Individual::new(mask, objectives))
        })
        .collect()
}

/// The classic loop: binary tournament on (rank, crowding), one-point
/// crossover, per-bit mutation, repair, then elitist (mu + lambda) selection,
/// until the evaluation budget cannot fund another full generation. Returns
/// front 0 of the final population.
pub fn nsga2_run<S: Real>(
    instance: &Instance<S>,
    config: &AlgorithmConfig,
) -> Result<RunResult<S>, Error> {
    config.validate()?;
    let start = Instant::now();
    let mut rng = Rng::seed_from_u64(config.seed);
    let mu = config.population_size;
    let mutation_rate = config.mutation_rate_for(instance.n());

    let mut pop = random_initial_population(instance, config, &mut rng)?;
    let mut evaluations = mu as u64;
    assign_rank_and_crowding(&mut pop);

    while evaluations + mu as u64 <= config.evaluation_budget {
        let mut offspring: Vec<Individual<S>> = Vec::with_capacity(mu);
        while offspring.len() < mu {
            let p1 = binary_tournament(&pop, rank_crowding_order, &mut rng).mask.clone();
            let p2 = binary_tournament(&pop, rank_crowding_order, &mut rng).mask.clone();
            let (c1, c2) = if rand::Rng::random::<f64>(&mut rng) < config.crossover_rate {
                one_point_crossover(&p1, &p2, &mut rng)
            } else {
                (p1, p2)
            };
            for child in [c1, c2] {
                if offspring.len() == mu {
                    break;
                }
                let mask = bitflip_mutation(child, mutation_rate, &mut rng);
                let objectives = evaluate_with(&mask, instance, config.aggregation)?;
                offspring.push(Individual::new(mask, objectives));
            }
        }
        evaluations += offspring.len() as u64;

        pop.extend(offspring);
        assign_rank_and_crowding(&mut pop);
        pop = select_survivors(pop, mu);
        assign_rank_and_crowding(&mut pop);
    }

    let front = FrontSet::from_members(
        pop.iter()
            .filter(|ind| ind.rank == 0)
            .map(|ind| FrontMember {
                mask: ind.mask.clone(),
                objectives: ind.objectives,
            })
            .collect(),
    );
    Ok(RunResult {
        algorithm: Algorithm::Nsga2,
        run_index: 0,
        seed: config.seed,
        front,
        evaluations,
        duration: start.elapsed(),
    })
}

/// Elitist truncation of the combined population: whole fronts while they
/// fit, then the split front by descending crowding (stable, so equal
/// crowding keeps front order).
fn select_survivors<S: Real>(mut combined: Vec<Individual<S>>, mu: usize) -> Vec<Individual<S>> {
    combined.sort_by(rank_crowding_order);
    combined.truncate(mu);
    combined
}
