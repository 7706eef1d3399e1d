use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::{Error, Result};

/// Largest number of non-zero differences handled by exact enumeration.
pub const EXACT_MAX_N: usize = 25;

/// Alternative hypothesis about the differences `left - right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    /// `left` tends to exceed `right`.
    Greater,
    /// `left` tends to fall below `right`.
    Less,
    TwoSided,
}

impl FromStr for Alternative {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "greater" => Ok(Alternative::Greater),
            "less" => Ok(Alternative::Less),
            "two_sided" | "twosided" => Ok(Alternative::TwoSided),
            other => Err(format!("unknown alternative `{other}`")),
        }
    }
}

/// Per-seed values of one indicator for two algorithms; `left[i]` and
/// `right[i]` come from the same seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedSamples {
    left: Vec<f64>,
    right: Vec<f64>,
}

impl PairedSamples {
    pub fn new(left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::UnpairedSamples {
                left: left.len(),
                right: right.len(),
            });
        }
        if left.len() < 5 {
            log::warn!("Wilcoxon test with only {} pairs has little power", left.len());
        }
        Ok(Self { left, right })
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn differences(&self) -> Vec<f64> {
        self.left.iter().zip(&self.right).map(|(a, b)| a - b).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Rank sum of the positive differences.
    pub w_plus: f64,
    /// Rank sum of the negative differences.
    pub w_minus: f64,
    /// Non-zero differences used.
    pub n: usize,
    pub p_value: f64,
    pub method: PMethod,
}

struct Ranked {
    /// Doubled average ranks of |d|, so ties stay integral.
    doubled: Vec<u32>,
    /// Doubled rank sum of the positive differences.
    w_plus2: u32,
    /// `sum (t^3 - t)` over tie groups.
    tie_term: f64,
}

fn rank(diffs: &[f64]) -> Ranked {
    let mut nz: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    nz.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let n = nz.len();
    let mut doubled = vec![0u32; n];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && nz[j].abs() == nz[i].abs() {
            j += 1;
        }
        // ranks i+1..=j averaged, doubled: (i + 1 + j)
        for r in &mut doubled[i..j] {
            *r = (i + 1 + j) as u32;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let w_plus2 = nz
        .iter()
        .zip(&doubled)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();
    Ranked {
        doubled,
        w_plus2,
        tie_term,
    }
}

/// Null distribution of the doubled positive rank sum: `counts[s]` sign
/// patterns give sum `s`, out of `2^n`.
fn null_counts(doubled: &[u32]) -> Vec<f64> {
    let total: usize = doubled.iter().map(|&r| r as usize).sum();
    let mut counts = vec![0.0f64; total + 1];
    counts[0] = 1.0;
    let mut reach = 0;
    for &r in doubled {
        let r = r as usize;
        for s in (0..=reach).rev() {
            let c = counts[s];
            if c != 0.0 {
                counts[s + r] += c;
            }
        }
        reach += r;
    }
    counts
}

fn exact_p(ranked: &Ranked, alternative: Alternative) -> f64 {
    let counts = null_counts(&ranked.doubled);
    let all = 2f64.powi(ranked.doubled.len() as i32);
    let w = ranked.w_plus2 as usize;
    let upper = counts[w..].iter().sum::<f64>() / all;
    let lower = counts[..=w].iter().sum::<f64>() / all;
    match alternative {
        Alternative::Greater => upper,
        Alternative::Less => lower,
        Alternative::TwoSided => (2.0 * upper.min(lower)).min(1.0),
    }
}

fn normal_p(ranked: &Ranked, alternative: Alternative) -> f64 {
    let n = ranked.doubled.len() as f64;
    let w = ranked.w_plus2 as f64 / 2.0;
    let mean = n * (n + 1.0) / 4.0;
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - ranked.tie_term / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let sd = var.sqrt();
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
    let upper = 1.0 - std_normal.cdf((w - mean - 0.5) / sd);
    let lower = std_normal.cdf((w - mean + 0.5) / sd);
    match alternative {
        Alternative::Greater => upper,
        Alternative::Less => lower,
        Alternative::TwoSided => (2.0 * upper.min(lower)).min(1.0),
    }
}

fn result(ranked: &Ranked, p_value: f64, method: PMethod) -> WilcoxonResult {
    let total2: u32 = ranked.doubled.iter().sum();
    WilcoxonResult {
        w_plus: ranked.w_plus2 as f64 / 2.0,
        w_minus: (total2 - ranked.w_plus2) as f64 / 2.0,
        n: ranked.doubled.len(),
        p_value,
        method,
    }
}

/// Wilcoxon signed-rank test on `left - right`.
///
/// Zero differences are dropped and tied magnitudes share their average
/// rank. Up to [`EXACT_MAX_N`] non-zero differences the p-value comes from
/// the exact permutation distribution (conditional on the ties); above it a
/// tie-corrected normal approximation with continuity correction is used.
pub fn wilcoxon_signed_rank(samples: &PairedSamples, alternative: Alternative) -> Result<WilcoxonResult> {
    let ranked = rank(&samples.differences());
    if ranked.doubled.is_empty() {
        return Err(Error::WilcoxonUndefined);
    }
    Ok(if ranked.doubled.len() <= EXACT_MAX_N {
        result(&ranked, exact_p(&ranked, alternative), PMethod::Exact)
    } else {
        result(&ranked, normal_p(&ranked, alternative), PMethod::Normal)
    })
}

/// The normal approximation regardless of sample size.
pub fn wilcoxon_normal_approx(samples: &PairedSamples, alternative: Alternative) -> Result<WilcoxonResult> {
    let ranked = rank(&samples.differences());
    if ranked.doubled.is_empty() {
        return Err(Error::WilcoxonUndefined);
    }
    Ok(result(&ranked, normal_p(&ranked, alternative), PMethod::Normal))
}
