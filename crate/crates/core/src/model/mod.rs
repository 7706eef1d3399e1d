//! The CCHP energy-flow model.
//!
//! Three decisions per period drive the plant: electricity bought from the
//! grid (`x1`), natural gas burned in the power generation unit (`x2`) and
//! natural gas burned in the boiler (`x3`). Everything else, including the
//! objectives and the demand shortfall, is derived from them.

mod objectives;
mod scenario;
mod state;

pub use objectives::{
    apply_case, bounds, eval_objectives, improvement_rate, reference_gas, reference_objectives,
    violation, ImprovementRates, ObjectiveVector, ViolationMeasure,
};
pub use scenario::{
    DispatchDecision, Interpretation, OperatingCase, PeriodInput, ReferenceSystem, Scenario,
    SystemParams,
};
pub use state::{derive_state, pgu_electric, NodeResiduals, PeriodState};

use crate::{Bounds, Problem, Result};

/// A validated scenario together with its decision box, ready for a solver.
#[derive(Debug, Clone)]
pub struct DispatchProblem {
    scenario: Scenario,
    bounds: Bounds,
}

impl DispatchProblem {
    pub fn new(scenario: Scenario) -> Result<Self> {
        scenario.validate()?;
        let bounds = bounds(&scenario);
        Ok(Self { scenario, bounds })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Full node-flow breakdown of a decision, one entry per period.
    pub fn states(&self, decision: &[f64]) -> Vec<PeriodState> {
        decision
            .chunks_exact(3)
            .zip(&self.scenario.periods)
            .map(|(x, period)| derive_state(x[0], x[1], x[2], period, &self.scenario.params))
            .collect()
    }
}

impl Problem for DispatchProblem {
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    /// Clamps to the box, zeroes case-disabled units and switches off a PGU
    /// whose fuel is below the intercept `b` (it would produce no power).
    fn repair(&self, x: &mut [f64]) {
        self.bounds.clamp(x);
        apply_case(x, self.scenario.case);
        let b = self.scenario.params.b;
        for triple in x.chunks_exact_mut(3) {
            if triple[1] < b {
                triple[1] = 0.0;
            }
        }
    }

    fn evaluate(&self, x: &[f64]) -> (ObjectiveVector, ViolationMeasure) {
        debug_assert_eq!(x.len(), self.scenario.dimension());
        (
            objectives::objectives_unchecked(x, &self.scenario),
            objectives::violation_unchecked(x, &self.scenario),
        )
    }
}
