//! Front-quality indicators, the grid oracle and the Wilcoxon signed-rank
//! test.

mod indicators;
mod oracle;
mod wilcoxon;

pub use indicators::{
    clean_front, extreme_points, generalized_spread, hypervolume, ideal_and_nadir, joint_indicators,
    normalize_front, IndicatorReport, HV_REFERENCE,
};
pub use oracle::brute_force_front;
pub use wilcoxon::{
    wilcoxon_normal_approx, wilcoxon_signed_rank, Alternative, PMethod, PairedSamples, WilcoxonResult,
    EXACT_MAX_N,
};

use serde::{Deserialize, Serialize};

/// Max / min / mean of a per-seed indicator column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub max: f64,
    pub min: f64,
    pub mean: f64,
}

impl Summary {
    /// `None` for an empty column.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        Some(Self {
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            mean: values.iter().sum::<f64>() / values.len() as f64,
        })
    }
}
