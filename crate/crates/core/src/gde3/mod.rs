//! Generalized differential evolution (GDE3) with best-compromise-solution
//! extraction.
//!
//! Each iteration builds one DE/rand/1/bin trial per parent. A trial that
//! constraint-dominates its parent replaces it, a dominated trial is dropped,
//! and when neither wins both survive. The enlarged pool is then pruned back
//! to the population size by non-dominated sorting and crowding distance.

mod bcs;

pub use bcs::{best_compromise, compromise_distances, BcsMode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::moea::{constraint_dominates, fast_nondominated_sort, prune, FrontArchive, Individual};
use crate::{Bounds, Error, Problem, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    pub pop_size: usize,
    pub max_iters: usize,
    /// Differential weight.
    pub f: f64,
    /// Crossover rate.
    pub cr: f64,
    pub seed: u64,
    #[serde(default)]
    pub bcs_mode: BcsMode,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            pop_size: 100,
            max_iters: 250,
            f: 0.5,
            cr: 0.5,
            seed: 1,
            bcs_mode: BcsMode::Raw,
        }
    }
}

impl SolverParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 4 {
            return Err(Error::InvalidParams {
                field: "pop_size",
                reason: format!("DE/rand/1 needs at least 4 members, got {}", self.pop_size),
            });
        }
        if !(self.f > 0.0 && self.f.is_finite()) {
            return Err(Error::InvalidParams {
                field: "f",
                reason: format!("must be > 0, got {}", self.f),
            });
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::InvalidParams {
                field: "cr",
                reason: format!("must lie in [0, 1], got {}", self.cr),
            });
        }
        Ok(())
    }
}

/// DE/rand/1/bin trial vector for `parent`, clamped to `bounds`.
///
/// The donors `r1`, `r2`, `r3` are distinct from each other and from the
/// parent. Coordinate `j_rand` always comes from the mutant.
pub fn de_trial<R: Rng + ?Sized>(
    pop: &[Individual],
    parent: usize,
    params: &SolverParams,
    bounds: &Bounds,
    rng: &mut R,
) -> Vec<f64> {
    let n = pop.len();
    assert!(n >= 4, "DE/rand/1 needs at least 4 members");
    let mut pick = |taken: &[usize]| loop {
        let r = rng.gen_range(0..n);
        if !taken.contains(&r) {
            return r;
        }
    };
    let r1 = pick(&[parent]);
    let r2 = pick(&[parent, r1]);
    let r3 = pick(&[parent, r1, r2]);

    let dim = pop[parent].decision.len();
    let j_rand = rng.gen_range(0..dim);
    let (base, a, b) = (&pop[r1].decision, &pop[r2].decision, &pop[r3].decision);
    let target = &pop[parent].decision;
    let mut trial: Vec<f64> = (0..dim)
        .map(|j| {
            let cross = rng.gen::<f64>() < params.cr;
            if cross || j == j_rand {
                base[j] + params.f * (a[j] - b[j])
            } else {
                target[j]
            }
        })
        .collect();
    bounds.clamp(&mut trial);
    trial
}

/// One generation: trials for every parent, pairwise survival, pruning.
pub fn gde3_step<P: Problem + ?Sized, R: Rng + ?Sized>(
    pop: Vec<Individual>,
    problem: &P,
    params: &SolverParams,
    rng: &mut R,
) -> Vec<Individual> {
    let bounds = problem.bounds();
    let decisions: Vec<Vec<f64>> = (0..pop.len())
        .map(|i| {
            let mut x = de_trial(&pop, i, params, bounds, rng);
            problem.repair(&mut x);
            x
        })
        .collect();
    let trials: Vec<Individual> = decisions
        .into_par_iter()
        .map(|x| Individual::evaluate(problem, x))
        .collect();
    select_and_prune(pop, trials, params.pop_size)
}

/// Survival of parents against their trials, then pruning to `n`.
/// Extra survivors are appended after the parent slots.
pub(crate) fn select_and_prune(
    parents: Vec<Individual>,
    trials: Vec<Individual>,
    n: usize,
) -> Vec<Individual> {
    let mut next = Vec::with_capacity(parents.len());
    let mut extra = Vec::new();
    for (parent, trial) in parents.into_iter().zip(trials) {
        if constraint_dominates(&trial, &parent) {
            next.push(trial);
        } else if constraint_dominates(&parent, &trial) {
            next.push(parent);
        } else {
            next.push(parent);
            extra.push(trial);
        }
    }
    next.extend(extra);
    if next.len() > n {
        prune(next, n).expect("pool is larger than the target size")
    } else {
        next
    }
}

/// Per-iteration telemetry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub iteration: usize,
    /// Feasible members of the population.
    pub feasible: usize,
    /// Feasible members of the first front.
    pub archive_size: usize,
    /// Smallest total violation in the population.
    pub min_violation: f64,
}

impl IterationStats {
    fn of(iteration: usize, pop: &[Individual]) -> Self {
        let feasible = pop.iter().filter(|i| i.is_feasible()).count();
        let archive_size = fast_nondominated_sort(pop)
            .first()
            .map(|f| f.iter().filter(|&&i| pop[i].is_feasible()).count())
            .unwrap_or(0);
        let min_violation = pop
            .iter()
            .map(|i| i.violation.total)
            .fold(f64::INFINITY, f64::min);
        Self {
            iteration,
            feasible,
            archive_size,
            min_violation,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Feasible non-dominated members of the final population.
    pub front: FrontArchive,
    /// Best compromise under [`SolverParams::bcs_mode`].
    pub best: Individual,
    pub telemetry: Vec<IterationStats>,
    pub population: Vec<Individual>,
}

/// Uniform random population inside the box, repaired and evaluated.
pub fn initial_population<P: Problem + ?Sized, R: Rng + ?Sized>(
    problem: &P,
    size: usize,
    rng: &mut R,
) -> Vec<Individual> {
    let bounds = problem.bounds();
    let decisions: Vec<Vec<f64>> = (0..size)
        .map(|_| {
            let mut x: Vec<f64> = bounds
                .lower
                .iter()
                .zip(&bounds.upper)
                .map(|(&lo, &hi)| lo + rng.gen::<f64>() * (hi - lo))
                .collect();
            problem.repair(&mut x);
            x
        })
        .collect();
    decisions
        .into_par_iter()
        .map(|x| Individual::evaluate(problem, x))
        .collect()
}

/// Runs BCS-GDE for exactly `max_iters` generations.
pub fn run<P: Problem + ?Sized>(problem: &P, params: &SolverParams) -> Result<RunOutcome> {
    run_with_observer(problem, params, |_, _| {})
}

/// [`run`] with a callback receiving each generation's population
/// (iteration 0 is the initial population).
pub fn run_with_observer<P, F>(problem: &P, params: &SolverParams, mut observe: F) -> Result<RunOutcome>
where
    P: Problem + ?Sized,
    F: FnMut(usize, &[Individual]),
{
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut pop = initial_population(problem, params.pop_size, &mut rng);
    observe(0, &pop);
    let mut telemetry = Vec::with_capacity(params.max_iters + 1);
    telemetry.push(IterationStats::of(0, &pop));

    for iteration in 1..=params.max_iters {
        pop = gde3_step(pop, problem, params, &mut rng);
        observe(iteration, &pop);
        telemetry.push(IterationStats::of(iteration, &pop));
    }

    let front = FrontArchive::from_individuals(pop.iter().cloned());
    if front.is_empty() {
        let least = pop
            .iter()
            .min_by(|a, b| a.violation.total.total_cmp(&b.violation.total))
            .cloned()
            .expect("population is never empty");
        log::warn!(
            "no feasible solution after {} iterations (least violation {})",
            params.max_iters,
            least.violation.total
        );
        return Err(Error::NoFeasible {
            iterations: params.max_iters,
            least_violating: Box::new(least),
            telemetry,
        });
    }
    let best = best_compromise(&front, params.bcs_mode)?;
    Ok(RunOutcome {
        front,
        best,
        telemetry,
        population: pop,
    })
}
