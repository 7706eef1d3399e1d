//! NSGA-II comparator: binary tournament on rank and crowding, simulated
//! binary crossover, polynomial mutation and (mu + lambda) survival.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gde3::initial_population;
use crate::moea::{prune, rank_and_crowding, FrontArchive, Individual};
use crate::{Bounds, Error, Problem, Result};

const EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Nsga2Params {
    pub pop_size: usize,
    pub max_gens: usize,
    pub crossover_prob: f64,
    pub crossover_dist_index: f64,
    /// Per-variable mutation probability; `None` means `1 / dimension`.
    #[serde(default)]
    pub mutation_prob: Option<f64>,
    pub mutation_dist_index: f64,
    pub seed: u64,
}

impl Default for Nsga2Params {
    fn default() -> Self {
        Self {
            pop_size: 100,
            max_gens: 250,
            crossover_prob: 0.9,
            crossover_dist_index: 20.0,
            mutation_prob: None,
            mutation_dist_index: 20.0,
            seed: 1,
        }
    }
}

impl Nsga2Params {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn mutation_prob_for(&self, dimension: usize) -> f64 {
        self.mutation_prob
            .unwrap_or(1.0 / dimension.max(1) as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: String| Err(Error::InvalidParams { field, reason });
        if self.pop_size < 2 || !self.pop_size.is_multiple_of(2) {
            return bad("pop_size", format!("must be even and >= 2, got {}", self.pop_size));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return bad("crossover_prob", format!("must lie in [0, 1], got {}", self.crossover_prob));
        }
        if let Some(p) = self.mutation_prob {
            if !(0.0..=1.0).contains(&p) {
                return bad("mutation_prob", format!("must lie in [0, 1], got {p}"));
            }
        }
        if self.crossover_dist_index.is_nan() || self.crossover_dist_index <= 0.0 {
            return bad("crossover_dist_index", "must be > 0".into());
        }
        if self.mutation_dist_index.is_nan() || self.mutation_dist_index <= 0.0 {
            return bad("mutation_dist_index", "must be > 0".into());
        }
        Ok(())
    }
}

fn sbx_spread_factor(rand: f64, beta: f64, eta: f64) -> f64 {
    let alpha = 2.0 - beta.powf(-(eta + 1.0));
    if rand <= 1.0 / alpha {
        (rand * alpha).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 - rand * alpha)).powf(1.0 / (eta + 1.0))
    }
}

/// Bounded simulated binary crossover. With probability `crossover_prob`
/// every variable is recombined and the two children's values are swapped
/// at random, so each child is centred on the parents' midpoint; otherwise
/// the children are copies.
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    params: &Nsga2Params,
    bounds: &Bounds,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(p1.len(), p2.len(), "parents differ in dimension");
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.gen::<f64>() > params.crossover_prob {
        return (c1, c2);
    }
    let eta = params.crossover_dist_index;
    for j in 0..p1.len() {
        let (lo, hi) = (bounds.lower[j], bounds.upper[j]);
        let (mut v1, mut v2) = (p1[j], p2[j]);
        if (v1 - v2).abs() > EPS && hi > lo {
            let (y1, y2) = (v1.min(v2), v1.max(v2));
            let u = rng.gen::<f64>();
            let bq = sbx_spread_factor(u, 1.0 + 2.0 * (y1 - lo) / (y2 - y1), eta);
            v1 = (0.5 * ((y1 + y2) - bq * (y2 - y1))).clamp(lo, hi);
            let bq = sbx_spread_factor(u, 1.0 + 2.0 * (hi - y2) / (y2 - y1), eta);
            v2 = (0.5 * ((y1 + y2) + bq * (y2 - y1))).clamp(lo, hi);
        }
        if rng.gen::<f64>() <= 0.5 {
            std::mem::swap(&mut v1, &mut v2);
        }
        c1[j] = v1;
        c2[j] = v2;
    }
    (c1, c2)
}

/// Bounded polynomial mutation.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &[f64],
    params: &Nsga2Params,
    bounds: &Bounds,
    rng: &mut R,
) -> Vec<f64> {
    let prob = params.mutation_prob_for(x.len());
    let eta = params.mutation_dist_index;
    let pow = 1.0 / (eta + 1.0);
    x.iter()
        .enumerate()
        .map(|(j, &y)| {
            if rng.gen::<f64>() >= prob {
                return y;
            }
            let (lo, hi) = (bounds.lower[j], bounds.upper[j]);
            if hi <= lo {
                return lo;
            }
            let d1 = (y - lo) / (hi - lo);
            let d2 = (hi - y) / (hi - lo);
            let u = rng.gen::<f64>();
            let deltaq = if u <= 0.5 {
                let val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
                val.powf(pow) - 1.0
            } else {
                let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
                1.0 - val.powf(pow)
            };
            (y + deltaq * (hi - lo)).clamp(lo, hi)
        })
        .collect()
}

fn tournament<R: Rng + ?Sized>(rank: &[usize], crowding: &[f64], rng: &mut R) -> usize {
    let n = rank.len();
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    if rank[a] != rank[b] {
        return if rank[a] < rank[b] { a } else { b };
    }
    if crowding[a] > crowding[b] {
        a
    } else if crowding[b] > crowding[a] {
        b
    } else if rng.gen::<bool>() {
        a
    } else {
        b
    }
}

/// Final population of an NSGA-II run together with its feasible front.
#[derive(Debug, Clone)]
pub struct Nsga2Outcome {
    pub front: FrontArchive,
    pub population: Vec<Individual>,
}

/// Runs NSGA-II for `max_gens` generations and returns the feasible first
/// front of the final population (possibly empty).
pub fn nsga2_run<P: Problem + ?Sized>(problem: &P, params: &Nsga2Params) -> Result<FrontArchive> {
    nsga2_run_full(problem, params).map(|o| o.front)
}

pub fn nsga2_run_full<P: Problem + ?Sized>(problem: &P, params: &Nsga2Params) -> Result<Nsga2Outcome> {
    params.validate()?;
    let bounds = problem.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut pop = initial_population(problem, params.pop_size, &mut rng);

    for _ in 0..params.max_gens {
        let (rank, crowding) = rank_and_crowding(&pop);
        let mut children = Vec::with_capacity(params.pop_size);
        while children.len() < params.pop_size {
            let a = tournament(&rank, &crowding, &mut rng);
            let b = tournament(&rank, &crowding, &mut rng);
            let (c1, c2) = sbx_crossover(&pop[a].decision, &pop[b].decision, params, bounds, &mut rng);
            for c in [c1, c2] {
                let mut m = polynomial_mutation(&c, params, bounds, &mut rng);
                problem.repair(&mut m);
                children.push(m);
            }
        }
        let offspring: Vec<Individual> = children
            .into_par_iter()
            .map(|x| Individual::evaluate(problem, x))
            .collect();
        pop.extend(offspring);
        pop = prune(pop, params.pop_size)?;
    }

    let front = FrontArchive::from_individuals(pop.iter().cloned());
    Ok(Nsga2Outcome { front, population: pop })
}
