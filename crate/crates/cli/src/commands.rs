use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use cchp::frontio::{self, FrontRow};
use cchp::gde3::{self, compromise_distances, BcsMode, IterationStats, SolverParams};
use cchp::metrics::{
    brute_force_front, joint_indicators, wilcoxon_signed_rank, Alternative, IndicatorReport, PairedSamples, Summary,
};
use cchp::model::{improvement_rate, reference_gas, reference_objectives, DispatchProblem, ObjectiveVector, Scenario};
use cchp::moea::{FrontArchive, Individual};
use cchp::nsga2::{self, Nsga2Params};

use crate::manifest::Algorithm;

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

pub struct SolveJob {
    pub scenario: Scenario,
    pub algorithm: Algorithm,
    pub solver: SolverParams,
    pub nsga2: Nsga2Params,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
}

struct SeedRun {
    front: FrontArchive,
    telemetry: Option<Vec<IterationStats>>,
}

fn run_seed(problem: &DispatchProblem, job: &SolveJob, seed: u64) -> cchp::Result<SeedRun> {
    match job.algorithm {
        Algorithm::BcsGde => {
            let out = gde3::run(problem, &job.solver.with_seed(seed))?;
            Ok(SeedRun {
                front: out.front,
                telemetry: Some(out.telemetry),
            })
        }
        Algorithm::Nsga2 => {
            let out = nsga2::nsga2_run_full(problem, &job.nsga2.with_seed(seed))?;
            if out.front.is_empty() {
                let least = out
                    .population
                    .iter()
                    .min_by(|a, b| a.violation.total.total_cmp(&b.violation.total))
                    .cloned()
                    .expect("population is non-empty");
                return Err(cchp::Error::NoFeasible {
                    iterations: job.nsga2.max_gens,
                    least_violating: Box::new(least),
                    telemetry: Vec::new(),
                });
            }
            Ok(SeedRun {
                front: out.front,
                telemetry: None,
            })
        }
    }
}

fn bcs_record(front: &FrontArchive, mode: BcsMode, reference: &ObjectiveVector) -> serde_json::Value {
    let members = front.members();
    let Ok(best) = gde3::best_compromise(front, mode) else {
        return serde_json::Value::Null;
    };
    let distances = compromise_distances(members, mode);
    let index = members.iter().position(|m| *m == best).expect("best is a member");
    json!({
        "decision": best.decision,
        "objectives": best.objectives,
        "distance": distances[index],
        "improvement_percent": improvement_rate(reference, &best.objectives).ok(),
    })
}

/// Runs every seed of a job and writes `front.csv`, `bcs.json` and (for
/// BCS-GDE) `telemetry.json`. A single seed writes into `out` directly;
/// several seeds write into `out/seed_<n>`.
pub fn solve(job: &SolveJob) -> Result<()> {
    let problem = DispatchProblem::new(job.scenario.clone())?;
    let reference = reference_objectives(&job.scenario);
    create_dir(&job.out)?;
    let results: Vec<(u64, cchp::Result<SeedRun>)> = job
        .seeds
        .par_iter()
        .map(|&seed| (seed, run_seed(&problem, job, seed)))
        .collect();

    let mut first_failure = None;
    for (seed, result) in results {
        let dir = if job.seeds.len() == 1 {
            job.out.clone()
        } else {
            job.out.join(format!("seed_{seed}"))
        };
        create_dir(&dir)?;
        match result {
            Ok(run) => {
                frontio::write_front_path(dir.join("front.csv"), &run.front)?;
                let record = json!({
                    "scenario": job.scenario.name,
                    "case": job.scenario.case.number(),
                    "algorithm": job.algorithm.to_string(),
                    "seed": seed,
                    "front_size": run.front.len(),
                    "reference": reference,
                    "raw": bcs_record(&run.front, BcsMode::Raw, &reference),
                    "normalized": bcs_record(&run.front, BcsMode::Normalized, &reference),
                });
                write_json(&dir.join("bcs.json"), &record)?;
                if let Some(telemetry) = &run.telemetry {
                    write_json(&dir.join("telemetry.json"), telemetry)?;
                }
                let best = gde3::best_compromise(&run.front, job.solver.bcs_mode)?;
                println!(
                    "seed {seed}: {} solutions, best compromise cost {:.2} pec {:.2} cde {:.2}",
                    run.front.len(),
                    best.objectives.cost,
                    best.objectives.pec,
                    best.objectives.cde
                );
            }
            Err(err @ cchp::Error::NoFeasible { .. }) => {
                if let cchp::Error::NoFeasible {
                    iterations,
                    least_violating,
                    telemetry,
                } = &err
                {
                    write_json(
                        &dir.join("infeasible.json"),
                        &json!({
                            "seed": seed,
                            "iterations": iterations,
                            "least_violating": least_violating,
                            "telemetry": telemetry,
                        }),
                    )?;
                }
                eprintln!("seed {seed}: {err}");
                first_failure.get_or_insert(err);
            }
            Err(err) => return Err(err.into()),
        }
    }
    match first_failure {
        Some(err) => Err(err.into()),
        None => Ok(()),
    }
}

/// Writes `reference.json` with the reference-system objectives and, when a
/// front file is given, the improvement rates of its best compromise.
pub fn reference(scenario: &Scenario, front: Option<&Path>, mode: BcsMode, out: &Path) -> Result<()> {
    let reference = reference_objectives(scenario);
    let gas: Vec<f64> = scenario.periods.iter().map(|p| reference_gas(p, scenario)).collect();
    let bcs = match front {
        Some(path) => {
            let rows = frontio::read_front_path(path).with_context(|| format!("reading {}", path.display()))?;
            let archive = FrontArchive::from_individuals(rows.iter().map(individual_from_row));
            let best = gde3::best_compromise(&archive, mode)?;
            let rates = improvement_rate(&reference, &best.objectives)?;
            println!(
                "best compromise improvement: cost {:.2}% pec {:.2}% cde {:.2}%",
                rates.cost, rates.pec, rates.cde
            );
            json!({
                "mode": mode,
                "objectives": best.objectives,
                "improvement_percent": rates,
            })
        }
        None => serde_json::Value::Null,
    };
    println!(
        "reference system: cost {:.2} pec {:.2} cde {:.2}",
        reference.cost, reference.pec, reference.cde
    );
    create_dir(out)?;
    write_json(
        &out.join("reference.json"),
        &json!({
            "scenario": scenario.name,
            "reference": reference,
            "reference_gas": gas,
            "best_compromise": bcs,
        }),
    )
}

fn individual_from_row(row: &FrontRow) -> Individual {
    Individual {
        decision: row.decision.clone(),
        objectives: row.objectives,
        violation: cchp::model::ViolationMeasure::new(row.violation, 0.0),
    }
}

/// Fronts of one algorithm, one per seed, in seed order.
pub struct Contender {
    pub label: String,
    pub fronts: Vec<Vec<[f64; 3]>>,
}

impl Contender {
    pub fn run(label: String, job: &SolveJob) -> Result<Self> {
        let problem = DispatchProblem::new(job.scenario.clone())?;
        let fronts = job
            .seeds
            .par_iter()
            .map(|&seed| match run_seed(&problem, job, seed) {
                Ok(run) => Ok(run.front.objective_points()),
                Err(cchp::Error::NoFeasible { .. }) => Ok(Vec::new()),
                Err(e) => Err(e),
            })
            .collect::<cchp::Result<Vec<_>>>()?;
        Ok(Self { label, fronts })
    }

    /// One front file per seed: every `*.csv` in `dir`, in file-name order.
    pub fn external(label: String, dir: &Path) -> Result<Self> {
        let mut files: Vec<PathBuf> = fs::read_dir(dir)
            .with_context(|| format!("listing {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        files.sort();
        if files.is_empty() {
            bail!("no .csv front files in {}", dir.display());
        }
        let fronts = files
            .iter()
            .map(|f| {
                frontio::read_front_path(f)
                    .map(|rows| frontio::feasible_points(&rows))
                    .with_context(|| format!("reading {}", f.display()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { label, fronts })
    }
}

fn summary_json(values: &[f64]) -> serde_json::Value {
    match Summary::of(values) {
        Some(s) => json!(s),
        None => serde_json::Value::Null,
    }
}

fn wilcoxon_json(left: Vec<f64>, right: Vec<f64>, alternative: Alternative) -> serde_json::Value {
    let samples = match PairedSamples::new(left, right) {
        Ok(s) => s,
        Err(e) => return json!({ "undefined": true, "reason": e.to_string() }),
    };
    match wilcoxon_signed_rank(&samples, alternative) {
        Ok(r) => json!({
            "alternative": alternative,
            "w_plus": r.w_plus,
            "w_minus": r.w_minus,
            "n": r.n,
            "p_value": r.p_value,
            "method": r.method,
        }),
        Err(e) => json!({ "alternative": alternative, "undefined": true, "reason": e.to_string() }),
    }
}

/// Per-seed indicators on jointly normalized fronts, their summary, and
/// pairwise Wilcoxon tests. Writes `indicators.csv`, `summary.csv` and
/// `wilcoxon.json`.
pub fn compare(contenders: &[Contender], out: &Path) -> Result<()> {
    if contenders.len() < 2 {
        bail!("compare needs at least two algorithms, got {}", contenders.len());
    }
    let n = contenders[0].fronts.len();
    for c in contenders {
        if c.fronts.len() != n {
            bail!(
                "mismatched seed counts: `{}` has {} fronts, `{}` has {n}",
                c.label,
                c.fronts.len(),
                contenders[0].label
            );
        }
    }
    // reports[seed][contender]
    let reports: Vec<Vec<IndicatorReport>> = (0..n)
        .map(|i| {
            let fronts: Vec<Vec<[f64; 3]>> = contenders.iter().map(|c| c.fronts[i].clone()).collect();
            joint_indicators(&fronts)
        })
        .collect();

    create_dir(out)?;
    let mut csv = String::from("algorithm,seed_index,hv,spread,n_solutions\n");
    for (k, c) in contenders.iter().enumerate() {
        for (i, per_seed) in reports.iter().enumerate() {
            let r = per_seed[k];
            let spread = r.spread.map(|s| frontio::round_sig(s).to_string()).unwrap_or_default();
            csv += &format!("{},{},{},{},{}\n", c.label, i + 1, frontio::round_sig(r.hv), spread, r.n_solutions);
        }
    }
    fs::write(out.join("indicators.csv"), csv)?;

    let hv = |k: usize| -> Vec<f64> { reports.iter().map(|r| r[k].hv).collect() };
    let spread = |k: usize| -> Vec<Option<f64>> { reports.iter().map(|r| r[k].spread).collect() };

    let mut summary = String::from("algorithm,hv_max,hv_min,hv_mean,spread_max,spread_min,spread_mean\n");
    println!("{:<16} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}", "algorithm", "HV max", "HV min", "HV ave", "Δ max", "Δ min", "Δ ave");
    for (k, c) in contenders.iter().enumerate() {
        let h = Summary::of(&hv(k));
        let s = Summary::of(&spread(k).into_iter().flatten().collect::<Vec<_>>());
        let cells = |s: Option<Summary>| match s {
            Some(s) => [s.max, s.min, s.mean].map(|v| frontio::round_sig(v).to_string()),
            None => [String::new(), String::new(), String::new()],
        };
        summary += &format!("{},{},{}\n", c.label, cells(h).join(","), cells(s).join(","));
        let show = |s: Option<Summary>| match s {
            Some(s) => format!("{:>9.4} {:>9.4} {:>9.4}", s.max, s.min, s.mean),
            None => format!("{:>9} {:>9} {:>9}", "-", "-", "-"),
        };
        println!("{:<16} {} {}", c.label, show(h), show(s));
    }
    fs::write(out.join("summary.csv"), summary)?;

    let mut pairs = Vec::new();
    for a in 0..contenders.len() {
        for b in a + 1..contenders.len() {
            let (sa, sb): (Vec<f64>, Vec<f64>) = spread(a)
                .into_iter()
                .zip(spread(b))
                .filter_map(|(x, y)| Some((x?, y?)))
                .unzip();
            pairs.push(json!({
                "left": contenders[a].label,
                "right": contenders[b].label,
                "seeds": n,
                "hv": {
                    "left_summary": summary_json(&hv(a)),
                    "right_summary": summary_json(&hv(b)),
                    "two_sided": wilcoxon_json(hv(a), hv(b), Alternative::TwoSided),
                    "left_greater": wilcoxon_json(hv(a), hv(b), Alternative::Greater),
                },
                "spread": {
                    "paired_seeds": sa.len(),
                    "two_sided": wilcoxon_json(sa.clone(), sb.clone(), Alternative::TwoSided),
                    "left_less": wilcoxon_json(sa, sb, Alternative::Less),
                },
            }));
        }
    }
    write_json(&out.join("wilcoxon.json"), &pairs)
}

/// Writes the grid oracle front as `oracle_front.csv`.
pub fn oracle(scenario: &Scenario, resolution: usize, out: &Path) -> Result<()> {
    let front = brute_force_front(scenario, resolution)?;
    create_dir(out)?;
    frontio::write_front_path(out.join("oracle_front.csv"), &front)?;
    println!("oracle front at resolution {resolution}: {} solutions", front.len());
    Ok(())
}
