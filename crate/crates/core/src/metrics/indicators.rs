use serde::{Deserialize, Serialize};

use crate::moea::nondominated_indices;
use crate::{Error, Result};

/// Hypervolume reference point in normalized objective space.
pub const HV_REFERENCE: [f64; 3] = [1.1, 1.1, 1.1];

/// Componentwise minimum and maximum over a set of point sets.
pub fn ideal_and_nadir<'a>(sets: impl IntoIterator<Item = &'a [[f64; 3]]>) -> ([f64; 3], [f64; 3]) {
    let mut ideal = [f64::INFINITY; 3];
    let mut nadir = [f64::NEG_INFINITY; 3];
    for set in sets {
        for p in set {
            for m in 0..3 {
                ideal[m] = ideal[m].min(p[m]);
                nadir[m] = nadir[m].max(p[m]);
            }
        }
    }
    (ideal, nadir)
}

/// Maps `front` into `[0, 1]^3` by `(v - ideal) / (nadir - ideal)`, clipped.
/// An axis with `nadir <= ideal` maps to 0.
pub fn normalize_front(front: &[[f64; 3]], ideal: [f64; 3], nadir: [f64; 3]) -> Vec<[f64; 3]> {
    front
        .iter()
        .map(|p| {
            let mut q = [0.0; 3];
            for m in 0..3 {
                let range = nadir[m] - ideal[m];
                q[m] = if range > 0.0 {
                    ((p[m] - ideal[m]) / range).clamp(0.0, 1.0)
                } else {
                    0.0
                };
            }
            q
        })
        .collect()
}

/// Exact hypervolume of the region dominated by `front` and bounded by
/// `reference` (minimization).
///
/// Points are swept in increasing third objective while a two-dimensional
/// staircase of the first two objectives is maintained; each slab adds the
/// staircase area times its thickness. Points that do not dominate the
/// reference point are skipped with a warning.
pub fn hypervolume(front: &[[f64; 3]], reference: [f64; 3]) -> f64 {
    let mut pts: Vec<[f64; 3]> = Vec::with_capacity(front.len());
    for p in front {
        if p.iter().zip(&reference).all(|(v, r)| v <= r) {
            pts.push(*p);
        } else {
            log::warn!("hypervolume: point {p:?} does not dominate reference {reference:?}; skipped");
        }
    }
    pts.sort_by(|a, b| a[2].total_cmp(&b[2]));

    // (x, y) with x strictly increasing and y strictly decreasing
    let mut stair: Vec<(f64, f64)> = Vec::new();
    let mut volume = 0.0;
    for (k, p) in pts.iter().enumerate() {
        let (x, y) = (p[0], p[1]);
        let pos = stair.partition_point(|&(sx, _)| sx <= x);
        let covered = pos > 0 && stair[pos - 1].1 <= y;
        if !covered {
            let mut start = pos;
            if start > 0 && stair[start - 1].0 == x {
                start -= 1;
            }
            let mut end = pos;
            while end < stair.len() && stair[end].1 >= y {
                end += 1;
            }
            stair.splice(start..end, [(x, y)]);
        }
        let next_z = pts.get(k + 1).map_or(reference[2], |q| q[2]);
        let depth = next_z - p[2];
        if depth > 0.0 {
            volume += staircase_area(&stair, reference[0], reference[1]) * depth;
        }
    }
    volume
}

fn staircase_area(stair: &[(f64, f64)], rx: f64, ry: f64) -> f64 {
    let mut area = 0.0;
    for (i, &(x, y)) in stair.iter().enumerate() {
        let next_x = stair.get(i + 1).map_or(rx, |s| s.0);
        area += (next_x - x) * (ry - y);
    }
    area
}

fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// For each objective, the point of `reference_front` with the largest value
/// in that objective (ties go to the lexicographically smallest point).
pub fn extreme_points(reference_front: &[[f64; 3]]) -> Vec<[f64; 3]> {
    (0..3)
        .filter_map(|m| {
            reference_front.iter().copied().max_by(|a, b| {
                a[m].total_cmp(&b[m])
                    .then(b[0].total_cmp(&a[0]))
                    .then(b[1].total_cmp(&a[1]))
                    .then(b[2].total_cmp(&a[2]))
            })
        })
        .collect()
}

/// Generalized spread of a front against the reference extremes:
/// `(sum_m d(e_m, S) + sum_i |d_i - d_mean|) / (sum_m d(e_m, S) + |S| d_mean)`
/// where `d_i` is the nearest-neighbour distance of member `i`.
///
/// Returns 1 when both numerator and denominator vanish (a fully collapsed
/// front sitting on all extremes).
pub fn generalized_spread(front: &[[f64; 3]], extremes: &[[f64; 3]]) -> Result<f64> {
    match front.len() {
        0 => return Err(Error::EmptyFront),
        1 => return Err(Error::SingletonFront),
        _ => {}
    }
    let nearest: Vec<f64> = front
        .iter()
        .enumerate()
        .map(|(i, p)| {
            front
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| distance(p, q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let n = front.len() as f64;
    let mean = nearest.iter().sum::<f64>() / n;
    let extreme_gap: f64 = extremes
        .iter()
        .map(|e| front.iter().map(|p| distance(e, p)).fold(f64::INFINITY, f64::min))
        .sum();
    let deviation: f64 = nearest.iter().map(|d| (d - mean).abs()).sum();
    let denominator = extreme_gap + n * mean;
    if denominator == 0.0 {
        return Ok(1.0);
    }
    Ok((extreme_gap + deviation) / denominator)
}

/// Quality of one front under a shared normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorReport {
    pub hv: f64,
    /// `None` when the front has fewer than two members.
    pub spread: Option<f64>,
    pub n_solutions: usize,
}

/// Non-dominated, de-duplicated subset of raw objective points.
pub fn clean_front(points: &[[f64; 3]]) -> Vec<[f64; 3]> {
    nondominated_indices(points).into_iter().map(|i| points[i]).collect()
}

/// Indicators for several fronts measured together: every front is
/// min-max normalized over the union of all of them, hypervolume uses
/// [`HV_REFERENCE`] and spread uses the extremes of the non-dominated union.
pub fn joint_indicators(fronts: &[Vec<[f64; 3]>]) -> Vec<IndicatorReport> {
    let cleaned: Vec<Vec<[f64; 3]>> = fronts.iter().map(|f| clean_front(f)).collect();
    let (ideal, nadir) = ideal_and_nadir(cleaned.iter().map(Vec::as_slice));
    let normalized: Vec<Vec<[f64; 3]>> = cleaned
        .iter()
        .map(|f| normalize_front(f, ideal, nadir))
        .collect();
    let union: Vec<[f64; 3]> = normalized.iter().flatten().copied().collect();
    let extremes = extreme_points(&clean_front(&union));
    normalized
        .iter()
        .map(|f| IndicatorReport {
            hv: hypervolume(f, HV_REFERENCE),
            spread: generalized_spread(f, &extremes).ok(),
            n_solutions: f.len(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    /// Inclusion-exclusion over all subsets; exact for small fronts.
    fn hv_inclusion_exclusion(front: &[[f64; 3]], r: [f64; 3]) -> f64 {
        let n = front.len();
        let mut total = 0.0;
        for mask in 1u32..(1 << n) {
            let mut corner = [f64::NEG_INFINITY; 3];
            for (i, p) in front.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    for m in 0..3 {
                        corner[m] = corner[m].max(p[m]);
                    }
                }
            }
            let vol: f64 = (0..3).map(|m| (r[m] - corner[m]).max(0.0)).product();
            total += if mask.count_ones() % 2 == 1 { vol } else { -vol };
        }
        total
    }

    #[test]
    fn normalize_examples() {
        let ideal = [1.0, 2.0, 3.0];
        let nadir = [3.0, 6.0, 9.0];
        let out = normalize_front(&[ideal, nadir, [2.0, 4.0, 6.0], [9.0, -9.0, 3.0]], ideal, nadir);
        assert_eq!(out[0], [0.0; 3]);
        assert_eq!(out[1], [1.0; 3]);
        assert_eq!(out[2], [0.5; 3]);
        assert_eq!(out[3], [1.0, 0.0, 0.0]);
        let flat = normalize_front(&[[5.0, 1.0, 1.0]], [5.0, 0.0, 0.0], [5.0, 2.0, 2.0]);
        assert_eq!(flat[0], [0.0, 0.5, 0.5]);
    }

    #[test]
    fn hv_single_box() {
        assert_eq!(hypervolume(&[[0.5, 0.5, 0.5]], [1.0; 3]), 0.125);
    }

    #[test]
    fn hv_two_boxes() {
        let hv = hypervolume(&[[0.2, 0.8, 0.8], [0.8, 0.2, 0.2]], [1.0; 3]);
        assert!((hv - 0.152).abs() < 1e-12, "{hv}");
    }

    #[test]
    fn hv_duplicates_and_outsiders() {
        let a = hypervolume(&[[0.2, 0.8, 0.8], [0.8, 0.2, 0.2]], [1.0; 3]);
        let b = hypervolume(
            &[[0.2, 0.8, 0.8], [0.8, 0.2, 0.2], [0.2, 0.8, 0.8], [1.5, 0.0, 0.0]],
            [1.0; 3],
        );
        assert_eq!(a, b);
        assert_eq!(hypervolume(&[], [1.0; 3]), 0.0);
    }

    #[test]
    fn hv_matches_monte_carlo() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let front: Vec<[f64; 3]> = (0..10).map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect();
            let exact = hypervolume(&front, [1.0; 3]);
            let samples = 200_000;
            let hits = (0..samples)
                .filter(|_| {
                    let s: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
                    front.iter().any(|p| (0..3).all(|m| p[m] <= s[m]))
                })
                .count();
            let mc = hits as f64 / samples as f64;
            assert!((exact - mc).abs() < 0.005, "exact {exact} mc {mc}");
        }
    }

    proptest! {
        #[test]
        fn hv_matches_inclusion_exclusion(
            front in prop::collection::vec(prop::array::uniform3(0.0f64..1.0), 1..9)
        ) {
            let exact = hv_inclusion_exclusion(&front, [1.0; 3]);
            prop_assert!((hypervolume(&front, [1.0; 3]) - exact).abs() < 1e-12);
        }

        #[test]
        fn hv_monotone_under_insertion(
            front in prop::collection::vec(prop::array::uniform3(0.0f64..1.0), 1..15),
            extra in prop::array::uniform3(0.0f64..1.0),
        ) {
            let before = hypervolume(&front, [1.1; 3]);
            let mut bigger = front.clone();
            bigger.push(extra);
            let after = hypervolume(&bigger, [1.1; 3]);
            prop_assert!(after >= before - 1e-12);
            let dominated = front.iter().any(|p| (0..3).all(|m| p[m] <= extra[m]));
            if dominated {
                prop_assert!((after - before).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spread_zero_for_uniform_front_on_extremes() {
        // Equilateral triangle whose vertices are the extremes.
        let front = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let extremes = extreme_points(&front);
        let d = generalized_spread(&front, &extremes).unwrap();
        assert!(d.abs() < 1e-12, "{d}");
    }

    #[test]
    fn spread_of_coincident_pair_is_driven_by_extremes() {
        let front = [[0.5, 0.5, 0.5], [0.5, 0.5, 0.5]];
        let extremes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        // d_mean = 0 so the ratio is gap / gap
        assert_eq!(generalized_spread(&front, &extremes).unwrap(), 1.0);
    }

    #[test]
    fn spread_grows_with_an_outlier() {
        let line: Vec<[f64; 3]> = (0..=10)
            .map(|i| {
                let t = i as f64 / 10.0;
                [t, 1.0 - t, 0.5]
            })
            .collect();
        let extremes = extreme_points(&line);
        let base = generalized_spread(&line, &extremes).unwrap();
        let mut with_outlier = line.clone();
        with_outlier.push([3.0, 3.0, 3.0]);
        let worse = generalized_spread(&with_outlier, &extremes).unwrap();
        assert!(worse > base, "{base} -> {worse}");
    }

    #[test]
    fn spread_rejects_tiny_fronts() {
        assert!(matches!(generalized_spread(&[[0.0; 3]], &[]), Err(Error::SingletonFront)));
        assert!(matches!(generalized_spread(&[], &[]), Err(Error::EmptyFront)));
    }

    #[test]
    fn joint_indicators_ignore_dominated_duplicates() {
        let a = vec![[1.0, 5.0, 2.0], [3.0, 2.0, 1.0], [5.0, 1.0, 4.0]];
        let mut b = a.clone();
        b.push([3.0, 2.0, 1.0]);
        b.push([6.0, 6.0, 6.0]);
        let r = joint_indicators(&[a.clone(), vec![[2.0, 2.0, 2.0], [0.5, 9.0, 9.0]]]);
        let s = joint_indicators(&[b, vec![[2.0, 2.0, 2.0], [0.5, 9.0, 9.0]]]);
        assert_eq!(r, s);
    }
}
