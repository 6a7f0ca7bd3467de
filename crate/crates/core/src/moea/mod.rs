//! The three solvers (NSGA-II, SPEA2, random search) over [`SelectionMask`]
//! genotypes, plus the machinery they share: non-dominated sorting, crowding
//! distance, front archives and the evaluation-budget run loop.

pub mod nsga2;
pub mod random_search;
pub mod spea2;
pub mod variation;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::instance::Instance;
use crate::objectives::{Aggregation, ObjectiveVector, SelectionMask};
use crate::scalar::Real;

pub use nsga2::{crowding_distance, fast_nondominated_sort, nsga2_run};
pub use random_search::random_search_run;
pub use spea2::{spea2_environmental_selection, spea2_fitness_assignment, spea2_run};

/// One candidate solution with its evaluation and per-algorithm bookkeeping.
#[derive(Debug, Clone)]
pub struct Individual<S> {
    pub mask: SelectionMask,
    pub objectives: ObjectiveVector<S>,
    /// NSGA-II front index; 0 means non-dominated within its population.
    pub rank: usize,
    /// NSGA-II crowding distance; boundary individuals carry +infinity.
    pub crowding: S,
    /// SPEA2 fitness F = R + D; non-dominated individuals have F < 1.
    pub spea2_fitness: S,
}

impl<S: Real> Individual<S> {
    pub fn new(mask: SelectionMask, objectives: ObjectiveVector<S>) -> Self {
        Individual {
            mask,
            objectives,
            rank: 0,
            crowding: S::zero(),
            spea2_fitness: S::zero(),
        }
    }
}

/// Shared solver parameters. Everything is exposed for sensitivity analysis;
/// the defaults are the literature-standard choices for bitstring MOEAs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub population_size: usize,
    /// SPEA2 archive capacity.
    pub archive_size: usize,
    /// Total objective evaluations allowed per run.
    pub evaluation_budget: u64,
    pub crossover_rate: f64,
    /// Per-bit flip probability; `None` means `1 / n`.
    pub mutation_rate: Option<f64>,
    pub tournament_size: usize,
    pub seed: u64,
    pub aggregation: Aggregation,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        AlgorithmConfig {
            population_size: 100,
            archive_size: 100,
            evaluation_budget: 40_000,
            crossover_rate: 0.9,
            mutation_rate: None,
            tournament_size: 2,
            seed: 0,
            aggregation: Aggregation::Sum,
        }
    }
}

impl AlgorithmConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.population_size == 0 {
            return Err(Error::Config("population_size must be positive".into()));
        }
        if self.archive_size == 0 {
            return Err(Error::Config("archive_size must be positive".into()));
        }
        if self.evaluation_budget < self.population_size as u64 {
            return Err(Error::Config(format!(
                "evaluation_budget {} is below the population size {}",
                self.evaluation_budget, self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::Config("crossover_rate must lie in [0, 1]".into()));
        }
        if let Some(rate) = self.mutation_rate {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::Config("mutation_rate must lie in [0, 1]".into()));
            }
        }
        if self.tournament_size != 2 {
            return Err(Error::Config("tournament_size must be 2".into()));
        }
        Ok(())
    }

    pub fn mutation_rate_for(&self, n: usize) -> f64 {
        self.mutation_rate.unwrap_or(1.0 / n as f64)
    }
}

/// One member of a Pareto front archive.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontMember<S> {
    pub mask: SelectionMask,
    pub objectives: ObjectiveVector<S>,
}

/// A non-dominated archive: pairwise non-dominated, deduplicated by objective
/// vector, in canonical order (energy ascending). Construction enforces all
/// three, so a `FrontSet` is valid by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontSet<S> {
    members: Vec<FrontMember<S>>,
}

impl<S: Real> FrontSet<S> {
    /// Filter to the non-dominated subset, deduplicate by objective vector
    /// (keeping the lexicographically smallest mask so the result does not
    /// depend on input order), and sort by ascending energy.
    pub fn from_members(candidates: Vec<FrontMember<S>>) -> Self {
        let mut kept: Vec<FrontMember<S>> = Vec::new();
        'outer: for c in &candidates {
            for other in &candidates {
                if crate::objectives::dominates(&other.objectives, &c.objectives) {
                    continue 'outer;
                }
            }
            match kept.iter_mut().find(|k| k.objectives == c.objectives) {
                Some(dup) => {
                    if c.mask < dup.mask {
                        dup.mask = c.mask.clone();
                    }
                }
                None => kept.push(c.clone()),
            }
        }
        kept.sort_by(|a, b| {
            a.objectives
                .energy_kwh
                .partial_cmp(&b.objectives.energy_kwh)
                .unwrap()
                .then_with(|| {
                    a.objectives
                        .reputation
                        .partial_cmp(&b.objectives.reputation)
                        .unwrap()
                })
                .then_with(|| a.mask.cmp(&b.mask))
        });
        FrontSet { members: kept }
    }

    pub fn members(&self) -> &[FrontMember<S>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Validation used when reading archives back from disk.
    pub fn is_internally_nondominated(members: &[FrontMember<S>]) -> bool {
        for (i, a) in members.iter().enumerate() {
            for (j, b) in members.iter().enumerate() {
                if i != j
                    && (crate::objectives::dominates(&a.objectives, &b.objectives)
                        || a.objectives == b.objectives)
                {
                    return false;
                }
            }
        }
        true
    }
}

/// The outcome of one solver run.
#[derive(Debug, Clone)]
pub struct RunResult<S> {
    pub algorithm: Algorithm,
    pub run_index: usize,
    pub seed: u64,
    pub front: FrontSet<S>,
    pub evaluations: u64,
    /// Wall-clock time; kept out of every output file so reruns stay
    /// byte-identical.
    pub duration: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Nsga2,
    Spea2,
    Random,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Nsga2, Algorithm::Spea2, Algorithm::Random];

    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::Nsga2 => "nsga2",
            Algorithm::Spea2 => "spea2",
            Algorithm::Random => "random",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "nsga2" => Ok(Algorithm::Nsga2),
            "spea2" => Ok(Algorithm::Spea2),
            "random" => Ok(Algorithm::Random),
            other => Err(Error::Usage(format!(
                "unknown algorithm {other:?}; expected nsga2, spea2 or random"
            ))),
        }
    }
}

/// Dispatch one run of the named algorithm.
pub fn run<S: Real>(
    algorithm: Algorithm,
    instance: &Instance<S>,
    config: &AlgorithmConfig,
) -> Result<RunResult<S>, Error> {
    match algorithm {
        Algorithm::Nsga2 => nsga2_run(instance, config),
        Algorithm::Spea2 => spea2_run(instance, config),
        Algorithm::Random => random_search_run(instance, config),
    }
}
