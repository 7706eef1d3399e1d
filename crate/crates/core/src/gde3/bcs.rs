use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::moea::{FrontArchive, Individual};
use crate::{Error, Result};

/// Scale on which distances to the ideal point `(0, 0, 0)` are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcsMode {
    /// Raw objective values.
    #[default]
    Raw,
    /// Objectives min-max scaled over the front first.
    Normalized,
}

impl FromStr for BcsMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(BcsMode::Raw),
            "normalized" | "normalised" => Ok(BcsMode::Normalized),
            other => Err(format!("unknown BCS mode `{other}`")),
        }
    }
}

/// Euclidean distance of every front member to the ideal point.
pub fn compromise_distances(members: &[Individual], mode: BcsMode) -> Vec<f64> {
    let points: Vec<[f64; 3]> = members.iter().map(|m| m.objectives.as_array()).collect();
    let scaled = match mode {
        BcsMode::Raw => points,
        BcsMode::Normalized => {
            let mut lo = [f64::INFINITY; 3];
            let mut hi = [f64::NEG_INFINITY; 3];
            for p in &points {
                for m in 0..3 {
                    lo[m] = lo[m].min(p[m]);
                    hi[m] = hi[m].max(p[m]);
                }
            }
            points
                .iter()
                .map(|p| {
                    let mut q = [0.0; 3];
                    for m in 0..3 {
                        let range = hi[m] - lo[m];
                        q[m] = if range > 0.0 { (p[m] - lo[m]) / range } else { 0.0 };
                    }
                    q
                })
                .collect()
        }
    };
    scaled
        .iter()
        .map(|q| q.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect()
}

/// The front member nearest the ideal point; ties go to the
/// lexicographically smallest objective vector.
pub fn best_compromise(front: &FrontArchive, mode: BcsMode) -> Result<Individual> {
    best_compromise_index(front.members(), mode)
        .map(|i| front.members()[i].clone())
        .ok_or(Error::EmptyFront)
}

pub(crate) fn best_compromise_index(members: &[Individual], mode: BcsMode) -> Option<usize> {
    let distance = compromise_distances(members, mode);
    (0..members.len()).min_by(|&i, &j| {
        let (a, b) = (members[i].objectives.as_array(), members[j].objectives.as_array());
        distance[i]
            .total_cmp(&distance[j])
            .then(a[0].total_cmp(&b[0]))
            .then(a[1].total_cmp(&b[1]))
            .then(a[2].total_cmp(&b[2]))
    })
}
