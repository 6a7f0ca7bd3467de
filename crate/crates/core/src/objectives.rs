//! Genotype and objective evaluation: miner subsets, the (energy, reputation)
//! objective pair, Pareto dominance and the fixed normalization used by the
//! hypervolume indicator.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::instance::Instance;
use crate::scalar::{real, Real};

/// Fixed-length bit vector over the instance's miners; the genotype.
/// A feasible selection has at least one bit set — a chain with zero miners
/// cannot mine — which [`evaluate`] enforces and [`repair`] restores.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SelectionMask {
    bits: Vec<bool>,
}

impl SelectionMask {
    pub fn empty(len: usize) -> Self {
        SelectionMask {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        SelectionMask { bits }
    }

    /// Each bit an independent fair coin. May come out empty; callers repair.
    pub fn random<R: rand::Rng>(len: usize, rng: &mut R) -> Self {
        SelectionMask {
            bits: (0..len).map(|_| rng.random::<bool>()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Indices of the selected miners.
    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(s: &str) -> Result<Self, Error> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Config(format!("invalid mask character {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SelectionMask { bits })
    }
}

/// Raw phenotype: daily energy of the selection and its aggregate reputation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveVector<S> {
    pub energy_kwh: S,
    pub reputation: S,
}

/// Both objectives mapped to `[0, 1]` in minimization orientation:
/// `f1 = energy / total_energy`, `f2 = 1 - reputation / total_reputation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPoint<S> {
    pub f1: S,
    pub f2: S,
}

impl<S: Real> NormalizedPoint<S> {
    /// Pareto dominance in (min, min) orientation.
    pub fn dominates(&self, other: &Self) -> bool {
        self.f1 <= other.f1
            && self.f2 <= other.f2
            && (self.f1 < other.f1 || self.f2 < other.f2)
    }
}

/// How member reputations aggregate into the set-level trust objective.
/// `Sum` creates the energy-vs-trust trade-off across subset sizes; `Mean`
/// collapses the front towards the single best-ratio miner and exists for
/// experimentation only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    #[default]
    Sum,
    Mean,
}

/// Evaluate a selection: energy and reputation summed over selected miners.
/// An empty selection is infeasible and an error; callers repair first.
pub fn evaluate<S: Real>(
    mask: &SelectionMask,
    instance: &Instance<S>,
) -> Result<ObjectiveVector<S>, Error> {
    evaluate_with(mask, instance, Aggregation::Sum)
}

pub fn evaluate_with<S: Real>(
    mask: &SelectionMask,
    instance: &Instance<S>,
    aggregation: Aggregation,
) -> Result<ObjectiveVector<S>, Error> {
    if mask.len() != instance.n() {
        return Err(Error::Config(format!(
            "mask length {} does not match instance size {}",
            mask.len(),
            instance.n()
        )));
    }
    let count = mask.popcount();
    if count == 0 {
        return Err(Error::InfeasibleSolution);
    }
    let mut energy = S::zero();
    let mut reputation = S::zero();
    for i in mask.selected() {
        energy = energy + instance.energy_of(i);
        reputation = reputation + instance.reputation_of(i);
    }
    if aggregation == Aggregation::Mean {
        reputation = reputation / real::<S>(count as f64);
    }
    Ok(ObjectiveVector {
        energy_kwh: energy,
        reputation,
    })
}

/// Pareto dominance on raw objectives: energy minimized, reputation maximized.
/// True iff `a` is no worse in both and strictly better in at least one.
pub fn dominates<S: Real>(a: &ObjectiveVector<S>, b: &ObjectiveVector<S>) -> bool {
    a.energy_kwh <= b.energy_kwh
        && a.reputation >= b.reputation
        && (a.energy_kwh < b.energy_kwh || a.reputation > b.reputation)
}

/// Map raw objectives into the fixed `[0,1]²` minimization space. Bounds are
/// the instance totals, so hypervolume values are comparable across
/// algorithms and runs of the same instance.
pub fn normalize<S: Real>(
    v: &ObjectiveVector<S>,
    instance: &Instance<S>,
) -> Result<NormalizedPoint<S>, Error> {
    if !(instance.total_energy_kwh() > S::zero()) {
        return Err(Error::DegenerateInstance(
            "total energy is zero; objectives cannot be normalized".into(),
        ));
    }
    if !(instance.total_reputation() > S::zero()) {
        return Err(Error::DegenerateInstance(
            "total reputation is zero; objectives cannot be normalized".into(),
        ));
    }
    Ok(NormalizedPoint {
        f1: v.energy_kwh / instance.total_energy_kwh(),
        f2: S::one() - v.reputation / instance.total_reputation(),
    })
}

/// Restore feasibility: a non-empty mask passes through unchanged, an empty
/// one gets a single uniformly random bit set from the caller's stream.
pub fn repair<R: rand::Rng>(mut mask: SelectionMask, rng: &mut R) -> SelectionMask {
    if mask.popcount() == 0 && !mask.is_empty() {
        let i = rng.random_range(0..mask.len());
        mask.set(i, true);
    }
    mask
}
