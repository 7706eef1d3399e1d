use rayon::prelude::*;

use crate::model::{DispatchProblem, Scenario};
use crate::moea::{FrontArchive, Individual};
use crate::{Error, Problem, Result};

/// Feasible non-dominated set of a `resolution`³ grid over the decision box
/// of a single-period scenario.
///
/// Grid points go through the same repair as solver candidates, so the
/// oracle and the solvers search the same space. A degenerate axis
/// contributes a single value.
pub fn brute_force_front(scenario: &Scenario, resolution: usize) -> Result<FrontArchive> {
    if scenario.num_periods() != 1 {
        return Err(Error::OracleNeedsSinglePeriod {
            periods: scenario.num_periods(),
        });
    }
    if resolution < 2 {
        return Err(Error::InvalidParams {
            field: "resolution",
            reason: format!("must be at least 2, got {resolution}"),
        });
    }
    let problem = DispatchProblem::new(scenario.clone())?;
    let bounds = problem.bounds();
    let axis = |k: usize| -> Vec<f64> {
        let (lo, hi) = (bounds.lower[k], bounds.upper[k]);
        if hi <= lo {
            return vec![lo];
        }
        (0..resolution)
            .map(|i| lo + (hi - lo) * i as f64 / (resolution - 1) as f64)
            .collect()
    };
    let (a1, a2, a3) = (axis(0), axis(1), axis(2));

    // each x1 slice is reduced to its own front, slices merged in order
    let slices: Vec<FrontArchive> = a1
        .par_iter()
        .map(|&x1| {
            let mut slice = Vec::with_capacity(a2.len() * a3.len());
            for &x2 in &a2 {
                for &x3 in &a3 {
                    let mut x = vec![x1, x2, x3];
                    problem.repair(&mut x);
                    let ind = Individual::evaluate(&problem, x);
                    if ind.is_feasible() {
                        slice.push(ind);
                    }
                }
            }
            FrontArchive::from_individuals(slice)
        })
        .collect();
    Ok(FrontArchive::from_individuals(
        slices.into_iter().flat_map(FrontArchive::into_members),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PeriodInput;
    use crate::moea::dominates_vec;

    fn single(e: f64, c: f64, h: f64) -> Scenario {
        Scenario::new(vec![PeriodInput {
            duration_h: 1.0,
            demand_e: e,
            demand_c: c,
            demand_h: h,
            price_el: 0.65,
            price_gas: 0.22,
        }])
    }

    #[test]
    fn zero_demand_gives_origin() {
        let f = brute_force_front(&single(0.0, 0.0, 0.0), 8).unwrap();
        assert_eq!(f.objective_points(), vec![[0.0, 0.0, 0.0]]);
    }

    #[test]
    fn corners_only() {
        let s = single(100.0, 50.0, 80.0);
        let f = brute_force_front(&s, 2).unwrap();
        let problem = DispatchProblem::new(s).unwrap();
        let b = problem.bounds().clone();
        let mut corners = Vec::new();
        for mask in 0..8 {
            let mut x: Vec<f64> = (0..3)
                .map(|k| if mask & (1 << k) != 0 { b.upper[k] } else { b.lower[k] })
                .collect();
            problem.repair(&mut x);
            corners.push(Individual::evaluate(&problem, x));
        }
        let expected = FrontArchive::from_individuals(corners);
        let mut a = f.objective_points();
        let mut e = expected.objective_points();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        e.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(a, e);
        assert!(!a.is_empty());
    }

    #[test]
    fn grid_front_is_feasible_and_mutually_nondominated() {
        let s = single(300.0, 200.0, 400.0);
        let f = brute_force_front(&s, 12).unwrap();
        let pts = f.objective_points();
        for p in &pts {
            assert!(!pts.iter().any(|q| dominates_vec(q, p)));
        }
        for m in f.iter() {
            assert!(m.is_feasible());
        }
    }

    #[test]
    fn multi_period_rejected() {
        let mut s = single(1.0, 1.0, 1.0);
        s.periods.push(s.periods[0]);
        assert!(matches!(
            brute_force_front(&s, 4),
            Err(Error::OracleNeedsSinglePeriod { periods: 2 })
        ));
    }
}
