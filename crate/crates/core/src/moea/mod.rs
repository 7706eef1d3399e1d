//! Algorithm-agnostic machinery for constrained multi-objective evolution.

mod archive;
mod sorting;

pub use archive::{nondominated_indices, FrontArchive};
pub use sorting::{crowding_distance, fast_nondominated_sort, prune, rank_and_crowding};

use serde::{Deserialize, Serialize};

use crate::model::{ObjectiveVector, ViolationMeasure};
use crate::Problem;

/// A decision vector with its cached evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub decision: Vec<f64>,
    pub objectives: ObjectiveVector,
    pub violation: ViolationMeasure,
}

impl Individual {
    pub fn evaluate<P: Problem + ?Sized>(problem: &P, decision: Vec<f64>) -> Self {
        let (objectives, violation) = problem.evaluate(&decision);
        Self {
            decision,
            objectives,
            violation,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation.is_feasible()
    }
}

/// Pareto dominance on raw objective triples (minimization).
pub fn dominates_vec(a: &[f64; 3], b: &[f64; 3]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

pub fn dominates(a: &Individual, b: &Individual) -> bool {
    dominates_vec(&a.objectives.as_array(), &b.objectives.as_array())
}

/// Feasible beats infeasible, infeasibles compare by total violation and
/// feasibles by Pareto dominance.
pub fn constraint_dominates(a: &Individual, b: &Individual) -> bool {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => a.violation.total < b.violation.total,
        (true, true) => dominates(a, b),
    }
}

#[cfg(test)]
pub(crate) fn synthetic(objectives: [f64; 3], violation: f64) -> Individual {
    Individual {
        decision: objectives.to_vec(),
        objectives: ObjectiveVector::from_array(objectives),
        violation: ViolationMeasure::new(violation, 0.0),
    }
}
