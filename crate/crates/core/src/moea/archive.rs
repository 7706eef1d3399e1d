use serde::{Deserialize, Serialize};

use super::{dominates_vec, Individual};

/// Indices of the non-dominated points, duplicates collapsed onto their
/// first occurrence. The result is in ascending index order.
///
/// Sorting lexicographically means a point can only be dominated by an
/// earlier one, so a staircase over the last two objectives answers each
/// query.
pub fn nondominated_indices(points: &[[f64; 3]]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&points[i], &points[j]);
        a[0].total_cmp(&b[0])
            .then(a[1].total_cmp(&b[1]))
            .then(a[2].total_cmp(&b[2]))
            .then(i.cmp(&j))
    });

    // (f2, f3) with f2 strictly increasing and f3 strictly decreasing.
    let mut stair: Vec<(f64, f64)> = Vec::new();
    let mut keep = Vec::new();
    for i in order {
        let [_, y, z] = points[i];
        // last staircase entry with f2 <= y holds the smallest f3 among them
        let pos = stair.partition_point(|&(sy, _)| sy <= y);
        if pos > 0 && stair[pos - 1].1 <= z {
            continue;
        }
        keep.push(i);
        // drop entries the new point covers: f2 >= y and f3 >= z
        let mut end = pos;
        while end < stair.len() && stair[end].1 >= z {
            end += 1;
        }
        stair.splice(pos..end, [(y, z)]);
    }
    keep.sort_unstable();
    keep
}

/// Feasible, mutually non-dominated individuals with distinct objective
/// vectors.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrontArchive {
    members: Vec<Individual>,
}

impl FrontArchive {
    pub fn new() -> Self {
        Self::default()
    }

    /// The feasible non-dominated subset of `individuals`; among equal
    /// objective vectors the first one wins.
    pub fn from_individuals(individuals: impl IntoIterator<Item = Individual>) -> Self {
        let feasible: Vec<Individual> = individuals.into_iter().filter(Individual::is_feasible).collect();
        let points: Vec<[f64; 3]> = feasible.iter().map(|i| i.objectives.as_array()).collect();
        let keep = nondominated_indices(&points);
        let mut keep = keep.into_iter().peekable();
        let members = feasible
            .into_iter()
            .enumerate()
            .filter_map(|(i, ind)| {
                if keep.peek() == Some(&i) {
                    keep.next();
                    Some(ind)
                } else {
                    None
                }
            })
            .collect();
        Self { members }
    }

    /// Offers a candidate. Returns `true` if it was added; dominated members
    /// are evicted. Infeasible, dominated and duplicate candidates are
    /// rejected.
    pub fn insert(&mut self, candidate: Individual) -> bool {
        if !candidate.is_feasible() {
            return false;
        }
        let c = candidate.objectives.as_array();
        for m in &self.members {
            let o = m.objectives.as_array();
            if o == c || dominates_vec(&o, &c) {
                return false;
            }
        }
        self.members
            .retain(|m| !dominates_vec(&c, &m.objectives.as_array()));
        self.members.push(candidate);
        true
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Individual> {
        self.members.iter()
    }

    pub fn objective_points(&self) -> Vec<[f64; 3]> {
        self.members.iter().map(|m| m.objectives.as_array()).collect()
    }

    pub fn into_members(self) -> Vec<Individual> {
        self.members
    }
}

impl<'a> IntoIterator for &'a FrontArchive {
    type Item = &'a Individual;
    type IntoIter = std::slice::Iter<'a, Individual>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}
