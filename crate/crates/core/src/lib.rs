//! Constrained three-objective dispatch of a combined cooling, heating and
//! power (CCHP) plant.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] – the energy-flow model: scenarios, derived flows, objectives,
//!   demand constraints, variable bounds and the no-CCHP reference system.
//! * [`moea`] – dominance relations, non-dominated sorting, crowding distance,
//!   population pruning and the feasible front archive.
//! * [`gde3`] – generalized differential evolution with best-compromise
//!   extraction (BCS-GDE).
//! * [`nsga2`] – an NSGA-II comparator built on the same machinery.
//! * [`metrics`] – hypervolume, generalized spread, the grid oracle and the
//!   Wilcoxon signed-rank test.
//! * [`frontio`] – the CSV interchange format for fronts.
//!
//! ```no_run
//! use cchp::{bundled, gde3::{self, SolverParams}, model::DispatchProblem};
//!
//! let scenario = bundled::load("rated_residential_t1").unwrap();
//! let problem = DispatchProblem::new(scenario).unwrap();
//! let outcome = gde3::run(&problem, &SolverParams::default()).unwrap();
//! println!("{} solutions, best compromise {:?}", outcome.front.len(), outcome.best.objectives);
//! ```

pub mod bundled;
mod error;
pub mod frontio;
pub mod gde3;
pub mod metrics;
pub mod model;
pub mod moea;
pub mod nsga2;
mod problem;

pub use error::{Error, Result};
pub use problem::{Bounds, Problem};
