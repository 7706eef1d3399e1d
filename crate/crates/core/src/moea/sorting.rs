use super::{constraint_dominates, Individual};
use crate::{Error, Result};

/// Deb's fast non-dominated sort under constraint-domination.
///
/// Returns fronts in rank order; each front lists population indices in
/// ascending order.
pub fn fast_nondominated_sort(pop: &[Individual]) -> Vec<Vec<usize>> {
    let n = pop.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];

    for i in 0..n {
        for j in (i + 1)..n {
            if constraint_dominates(&pop[i], &pop[j]) {
                dominated_by_me[i].push(j);
                domination_count[j] += 1;
            } else if constraint_dominates(&pop[j], &pop[i]) {
                dominated_by_me[j].push(i);
                domination_count[i] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each member of `front`, in the order given.
///
/// Members that are extreme in any objective get `+inf`; ties in an objective
/// are ordered by position in `front`.
pub fn crowding_distance(front: &[&Individual]) -> Vec<f64> {
    let n = front.len();
    let mut distance = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    for m in 0..3 {
        let value = |i: usize| front[i].objectives.as_array()[m];
        order.sort_by(|&i, &j| value(i).total_cmp(&value(j)).then(i.cmp(&j)));
        let (lo, hi) = (value(order[0]), value(order[n - 1]));
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for k in 1..n - 1 {
            distance[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / range;
        }
    }
    distance
}

/// Rank (front index) and crowding distance of every individual.
pub fn rank_and_crowding(pop: &[Individual]) -> (Vec<usize>, Vec<f64>) {
    let mut rank = vec![0; pop.len()];
    let mut crowding = vec![0.0; pop.len()];
    for (r, front) in fast_nondominated_sort(pop).iter().enumerate() {
        let members: Vec<&Individual> = front.iter().map(|&i| &pop[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&members)) {
            rank[i] = r;
            crowding[i] = d;
        }
    }
    (rank, crowding)
}

/// Reduces `pop` to `n` members: whole fronts in rank order, then the most
/// isolated members of the first front that does not fit. Survivors keep
/// their original relative order.
pub fn prune(pop: Vec<Individual>, n: usize) -> Result<Vec<Individual>> {
    if n > pop.len() {
        return Err(Error::PruneSize {
            requested: n,
            available: pop.len(),
        });
    }
    if n == pop.len() {
        return Ok(pop);
    }

    let mut keep = vec![false; pop.len()];
    let mut kept = 0;
    for front in fast_nondominated_sort(&pop) {
        if kept + front.len() <= n {
            for &i in &front {
                keep[i] = true;
            }
            kept += front.len();
        } else {
            let members: Vec<&Individual> = front.iter().map(|&i| &pop[i]).collect();
            let distance = crowding_distance(&members);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| distance[b].total_cmp(&distance[a]).then(front[a].cmp(&front[b])));
            for &k in order.iter().take(n - kept) {
                keep[front[k]] = true;
            }
            kept = n;
        }
        if kept == n {
            break;
        }
    }

    Ok(pop
        .into_iter()
        .zip(keep)
        .filter_map(|(ind, k)| k.then_some(ind))
        .collect())
}
