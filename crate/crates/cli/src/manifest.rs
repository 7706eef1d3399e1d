use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use cchp::bundled;
use cchp::gde3::SolverParams;
use cchp::model::Scenario;
use cchp::nsga2::Nsga2Params;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "bcs-gde")]
    BcsGde,
    #[serde(rename = "nsga2")]
    Nsga2,
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bcs-gde" | "bcs_gde" | "gde3" => Ok(Algorithm::BcsGde),
            "nsga2" | "nsga-ii" => Ok(Algorithm::Nsga2),
            other => Err(format!("unknown algorithm `{other}` (expected bcs-gde or nsga2)")),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::BcsGde => "bcs-gde",
            Algorithm::Nsga2 => "nsga2",
        })
    }
}

/// A batch of runs of one algorithm on one scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    /// Scenario file, or the name of a bundled scenario. Relative paths are
    /// resolved against the manifest's directory.
    pub scenario: String,
    #[serde(default = "default_algorithm")]
    pub algorithm: Algorithm,
    #[serde(default)]
    pub solver: SolverParams,
    #[serde(default)]
    pub nsga2: Nsga2Params,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Label used in comparison tables; defaults to the algorithm id.
    #[serde(default)]
    pub label: Option<String>,
}

fn default_algorithm() -> Algorithm {
    Algorithm::BcsGde
}

impl RunManifest {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        let mut manifest: RunManifest =
            serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if !bundled::NAMES.contains(&manifest.scenario.as_str()) {
            let resolved = base.join(&manifest.scenario);
            manifest.scenario = resolved.to_string_lossy().into_owned();
        }
        if let Some(dir) = &manifest.output_dir {
            if dir.is_relative() {
                manifest.output_dir = Some(base.join(dir));
            }
        }
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            bail!("manifest seed list is empty");
        }
        load_scenario(&self.scenario)?;
        Ok(())
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.algorithm.to_string())
    }
}

/// Loads a scenario from a file path, falling back to a bundled name.
pub fn load_scenario(source: &str) -> Result<Scenario> {
    let path = Path::new(source);
    if path.exists() {
        return Scenario::from_path(path).with_context(|| format!("loading scenario {}", path.display()));
    }
    if bundled::NAMES.contains(&source) {
        return Ok(bundled::load(source)?);
    }
    bail!(
        "scenario `{source}` is neither a file nor a bundled name ({})",
        bundled::NAMES.join(", ")
    )
}

/// A seed list given on the command line as `1,2,5-8`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeds(pub Vec<u64>);

impl FromStr for Seeds {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_seeds(s).map(Seeds)
    }
}

/// Parses `1,2,5-8` into a seed list.
pub fn parse_seeds(text: &str) -> std::result::Result<Vec<u64>, String> {
    let mut seeds = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (
                    a.trim().parse().map_err(|_| format!("bad seed `{a}`"))?,
                    b.trim().parse().map_err(|_| format!("bad seed `{b}`"))?,
                );
                if a > b {
                    return Err(format!("empty seed range `{part}`"));
                }
                seeds.extend(a..=b);
            }
            None => seeds.push(part.parse().map_err(|_| format!("bad seed `{part}`"))?),
        }
    }
    if seeds.is_empty() {
        return Err("no seeds given".into());
    }
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("1-3,7").unwrap(), vec![1, 2, 3, 7]);
        assert_eq!(parse_seeds("5").unwrap(), vec![5]);
        assert!(parse_seeds("").is_err());
        assert!(parse_seeds("4-2").is_err());
        assert!(parse_seeds("x").is_err());
    }

    #[test]
    fn manifest_defaults_and_paths() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("s.json"), bundled::load("zero_demand").unwrap().to_json_pretty()).unwrap();
        let path = dir.path().join("m.json");
        std::fs::write(&path, r#"{"scenario": "s.json", "seeds": [1, 2], "solver": {"max_iters": 5}}"#).unwrap();
        let m = RunManifest::from_path(&path).unwrap();
        assert_eq!(m.algorithm, Algorithm::BcsGde);
        assert_eq!(m.solver.max_iters, 5);
        assert_eq!(m.solver.pop_size, 100);
        assert!(Path::new(&m.scenario).is_file());

        std::fs::write(&path, r#"{"scenario": "hotel", "seeds": []}"#).unwrap();
        assert!(RunManifest::from_path(&path).is_err());
        std::fs::write(&path, r#"{"scenario": "nowhere.json", "seeds": [1]}"#).unwrap();
        assert!(RunManifest::from_path(&path).is_err());
    }
}
