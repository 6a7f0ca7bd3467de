//! Front-quality utilities: merging per-run fronts into a reference front and
//! the exact 2-D hypervolume indicator.

use crate::error::Error;
use crate::instance::Instance;
use crate::moea::{FrontSet, RunResult};
use crate::objectives::{normalize, NormalizedPoint};
use crate::scalar::{real, Real};

/// The worst corner of the normalized objective space the hypervolume is
/// measured against. The default (1, 1) is instance-intrinsic: selecting all
/// miners gives f1 = 1, zero reputation gives f2 = 1, so values stay
/// comparable across algorithms and runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePoint<S> {
    pub f1: S,
    pub f2: S,
}

impl<S: Real> Default for ReferencePoint<S> {
    fn default() -> Self {
        ReferencePoint {
            f1: S::one(),
            f2: S::one(),
        }
    }
}

/// Union of several fronts filtered to its non-dominated subset, deduplicated
/// by objective vector.
pub fn merge_fronts<S: Real>(fronts: &[FrontSet<S>]) -> FrontSet<S> {
    FrontSet::from_members(
        fronts
            .iter()
            .flat_map(|f| f.members().iter().cloned())
            .collect(),
    )
}

/// Exact area dominated by `points` (minimization orientation) within the
/// reference box: filter to the non-dominated subset, sort ascending by f1
/// and sweep the staircase. Points outside the box contribute zero.
pub fn hypervolume_2d<S: Real>(points: &[NormalizedPoint<S>], reference: &ReferencePoint<S>) -> S {
    let mut inside: Vec<&NormalizedPoint<S>> = points
        .iter()
        .filter(|p| p.f1 <= reference.f1 && p.f2 <= reference.f2)
        .collect();
    inside.sort_by(|a, b| {
        a.f1.partial_cmp(&b.f1)
            .unwrap()
            .then_with(|| a.f2.partial_cmp(&b.f2).unwrap())
    });

    // Sorted by (f1, f2): a point is on the staircase iff its f2 strictly
    // improves on everything before it.
    let mut area = S::zero();
    let mut staircase: Vec<&NormalizedPoint<S>> = Vec::with_capacity(inside.len());
    for p in inside {
        if staircase.last().map_or(true, |prev| p.f2 < prev.f2) {
            staircase.push(p);
        }
    }
    for (i, p) in staircase.iter().enumerate() {
        let next_f1 = staircase
            .get(i + 1)
            .map_or(reference.f1, |next| next.f1);
        area = area + (next_f1 - p.f1) * (reference.f2 - p.f2);
    }
    area
}

/// Normalize a run's front against its instance and measure its hypervolume.
pub fn per_run_hypervolume<S: Real>(
    run: &RunResult<S>,
    instance: &Instance<S>,
    reference: &ReferencePoint<S>,
) -> Result<S, Error> {
    front_hypervolume(&run.front, instance, reference)
}

pub fn front_hypervolume<S: Real>(
    front: &FrontSet<S>,
    instance: &Instance<S>,
    reference: &ReferencePoint<S>,
) -> Result<S, Error> {
    let points = front
        .members()
        .iter()
        .map(|m| normalize(&m.objectives, instance))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(hypervolume_2d(&points, reference))
}

/// Median of a sample; the midpoint of the two central order statistics for
/// even sizes.
pub fn median<S: Real>(values: &[S]) -> S {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / real::<S>(2.0)
    }
}
