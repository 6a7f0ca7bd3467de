//! SPEA2: strength/raw-fitness assignment with k-NN density, archive
//! truncation and the archive-driven generational loop.

use std::cmp::Ordering;
use std::time::Instant;

use rand::SeedableRng;

use crate::error::Error;
use crate::instance::Instance;
use crate::moea::nsga2::random_initial_population;
use crate::moea::variation::{binary_tournament, bitflip_mutation, one_point_crossover};
use crate::moea::{Algorithm, AlgorithmConfig, FrontMember, FrontSet, Individual, RunResult};
use crate::objectives::{evaluate_with, normalize, NormalizedPoint};
use crate::scalar::{real, Real};
use crate::Rng;

fn distance<S: Real>(a: &NormalizedPoint<S>, b: &NormalizedPoint<S>) -> S {
    let d1 = a.f1 - b.f1;
    let d2 = a.f2 - b.f2;
    (d1 * d1 + d2 * d2).sqrt()
}

/// Density neighbour index: k = floor(sqrt(pool size)), clamped to a valid
/// neighbour position.
fn knn_index(pool_size: usize) -> usize {
    ((pool_size as f64).sqrt().floor() as usize).clamp(1, pool_size.saturating_sub(1).max(1))
}

/// Sorted distances from member `i` to every other member.
fn sorted_distances<S: Real>(points: &[NormalizedPoint<S>], i: usize) -> Vec<S> {
    let mut d: Vec<S> = points
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, p)| distance(&points[i], p))
        .collect();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d
}

/// SPEA2 fitness over a pool of points in normalized (min, min) space:
/// strength S(i) = number of pool members i dominates; raw fitness R(i) = sum
/// of strengths of i's dominators; density D(i) = 1 / (sigma_i^k + 2) with
/// sigma_i^k the distance to the k-th nearest neighbour, k = floor(sqrt(N));
/// F(i) = R(i) + D(i). Non-dominated members always end up with F < 1.
pub fn spea2_fitness_assignment<S: Real>(points: &[NormalizedPoint<S>]) -> Vec<S> {
    let n = points.len();
    let mut strength = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && points[i].dominates(&points[j]) {
                strength[i] += 1;
            }
        }
    }
    let mut fitness = Vec::with_capacity(n);
    let k = knn_index(n);
    for i in 0..n {
        let raw: u64 = (0..n)
            .filter(|&j| j != i && points[j].dominates(&points[i]))
            .map(|j| strength[j])
            .sum();
        let sigma = if n > 1 {
            sorted_distances(points, i)[k - 1]
        } else {
            S::zero()
        };
        let density = S::one() / (sigma + real::<S>(2.0));
        fitness.push(real::<S>(raw as f64) + density);
    }
    fitness
}

/// Environmental selection: keep every F < 1 member; if the archive overflows,
/// iteratively drop the member with the smallest k-th-nearest-neighbour
/// distance (ties compared at successively nearer neighbours, then lowest
/// index); if it underflows, fill with the best dominated members by
/// ascending F. Returns indices into the pool.
pub fn spea2_environmental_selection<S: Real>(
    points: &[NormalizedPoint<S>],
    fitness: &[S],
    archive_size: usize,
) -> Vec<usize> {
    let mut archive: Vec<usize> = (0..points.len())
        .filter(|&i| fitness[i] < S::one())
        .collect();

    if archive.len() < archive_size {
        let mut dominated: Vec<usize> = (0..points.len())
            .filter(|&i| fitness[i] >= S::one())
            .collect();
        dominated.sort_by(|&a, &b| {
            fitness[a].partial_cmp(&fitness[b]).unwrap().then(a.cmp(&b))
        });
        archive.extend(dominated.into_iter().take(archive_size - archive.len()));
        return archive;
    }

    while archive.len() > archive_size {
        let current: Vec<NormalizedPoint<S>> = archive.iter().map(|&i| points[i]).collect();
        let k = knn_index(current.len());
        let dist_vectors: Vec<Vec<S>> = (0..current.len())
            .map(|i| sorted_distances(&current, i))
            .collect();
        // Primary key: the k-th nearest distance; ties broken by the (k-1)-th,
        // ..., 1st nearest, then by lowest pool index.
        let victim = (0..current.len())
            .min_by(|&a, &b| {
                for step in (0..k).rev() {
                    match dist_vectors[a][step].partial_cmp(&dist_vectors[b][step]).unwrap() {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                archive[a].cmp(&archive[b])
            })
            .unwrap();
        archive.remove(victim);
    }
    archive
}

/// SPEA2's run loop: evaluate the population, merge it with the archive,
/// assign fitness, truncate into the next archive, and breed the next
/// population by binary tournament on fitness over the archive, until the
/// budget cannot fund another generation. Returns the archive's non-dominated
/// members.
pub fn spea2_run<S: Real>(
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
    let mut archive: Vec<Individual<S>> = Vec::new();

    loop {
        let mut pool = archive;
        pool.append(&mut pop);
        // The pool is the set union of archive and population: identical
        // genotypes collapse to one copy. Without this, stacks of duplicates
        // crowd the archive and the truncation step deletes genuinely
        // distinct points instead of redundant copies.
        let mut seen = std::collections::HashSet::new();
        pool.retain(|ind| seen.insert(ind.mask.clone()));
        let points = pool
            .iter()
            .map(|ind| normalize(&ind.objectives, instance))
            .collect::<Result<Vec<_>, _>>()?;
        let fitness = spea2_fitness_assignment(&points);
        for (ind, f) in pool.iter_mut().zip(&fitness) {
            ind.spea2_fitness = *f;
        }
        let selected = spea2_environmental_selection(&points, &fitness, config.archive_size);
        archive = selected.into_iter().map(|i| pool[i].clone()).collect();

        if evaluations + mu as u64 > config.evaluation_budget {
            break;
        }

        let by_fitness = |a: &Individual<S>, b: &Individual<S>| {
            a.spea2_fitness.partial_cmp(&b.spea2_fitness).unwrap()
        };
        pop = Vec::with_capacity(mu);
        while pop.len() < mu {
            let p1 = binary_tournament(&archive, by_fitness, &mut rng).mask.clone();
            let p2 = binary_tournament(&archive, by_fitness, &mut rng).mask.clone();
            let (c1, c2) = if rand::Rng::random::<f64>(&mut rng) < config.crossover_rate {
                one_point_crossover(&p1, &p2, &mut rng)
            } else {
                (p1, p2)
            };
            for child in [c1, c2] {
                if pop.len() == mu {
                    break;
                }
                let mask = bitflip_mutation(child, mutation_rate, &mut rng);
                let objectives = evaluate_with(&mask, instance, config.aggregation)?;
                pop.push(Individual::new(mask, objectives));
            }
        }
        evaluations += mu as u64;
    }

    let front = FrontSet::from_members(
        archive
            .iter()
            .filter(|ind| ind.spea2_fitness < S::one())
            .map(|ind| FrontMember {
                mask: ind.mask.clone(),
                objectives: ind.objectives,
            })
            .collect(),
    );
    Ok(RunResult {
        algorithm: Algorithm::Spea2,
        run_index: 0,
        seed: config.seed,
        front,
        evaluations,
        duration: start.elapsed(),
    })
}
