//! `cchp`: command-line front end for the CCHP dispatch optimizer.
//!
//! Exit status is 0 on success, 2 when a run finds no feasible solution and
//! 1 for every other error.

mod commands;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use cchp::gde3::{BcsMode, SolverParams};
use cchp::model::{Interpretation, OperatingCase, Scenario};
use cchp::nsga2::Nsga2Params;

use commands::{Contender, SolveJob};
use manifest::{load_scenario, Algorithm, RunManifest, Seeds};

const DEFAULT_OUT: &str = "cchp-out";

#[derive(Parser)]
#[command(name = "cchp", version, about = "Multi-objective CCHP dispatch optimizer")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "CCHP_OUT_DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a scenario and write front.csv, bcs.json and telemetry.json.
    Solve(SolveArgs),
    /// Reference-system objectives and improvement rates of a front.
    Reference(ReferenceArgs),
    /// Multi-seed indicator comparison of two or more algorithms.
    Compare(CompareArgs),
    /// Brute-force grid front of a single-period scenario.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario JSON file or bundled name (hotel, office, residential,
    /// rated_residential_t1, zero_demand).
    #[arg(long)]
    scenario: Option<String>,

    /// Operating case: 1 full system, 2 PGU off, 3 boiler off.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    case: Option<u8>,

    /// Objective interpretation: literal or fuel_based.
    #[arg(long)]
    interpretation: Option<Interpretation>,
}

impl ScenarioArgs {
    fn load(&self, fallback: Option<&str>) -> Result<Scenario> {
        let Some(source) = self.scenario.as_deref().or(fallback) else {
            bail!("no scenario given (use --scenario)");
        };
        let mut scenario = load_scenario(source)?;
        if let Some(n) = self.case {
            scenario.case = OperatingCase::from_number(n).expect("range-checked by clap");
        }
        if let Some(i) = self.interpretation {
            scenario.interpretation = i;
        }
        scenario.validate()?;
        Ok(scenario)
    }
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm: bcs-gde or nsga2.
    #[arg(long)]
    algorithm: Option<Algorithm>,

    /// Seeds, e.g. `1-20` or `1,4,9`.
    #[arg(long)]
    seeds: Option<Seeds>,

    /// Best-compromise mode reported on stdout: raw or normalized.
    #[arg(long)]
    bcs: Option<BcsMode>,

    /// Population size.
    #[arg(long)]
    pop: Option<usize>,

    /// Iterations (generations for NSGA-II).
    #[arg(long)]
    iters: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Run manifest (JSON); flags given on the command line override it.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ReferenceArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Front CSV whose best compromise is compared with the reference.
    #[arg(long)]
    front: Option<PathBuf>,
    /// Best-compromise mode: raw or normalized.
    #[arg(long, default_value = "raw")]
    bcs: BcsMode,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// In-repo algorithm to run on --scenario (repeatable).
    #[arg(long = "algorithm")]
    algorithms: Vec<Algorithm>,
    /// Run manifest to include (repeatable).
    #[arg(long = "manifest")]
    manifests: Vec<PathBuf>,
    /// External fronts, one CSV per seed: NAME=DIR (repeatable).
    #[arg(long = "external", value_parser = parse_external)]
    externals: Vec<(String, PathBuf)>,
    /// Seeds for --algorithm runs.
    #[arg(long, default_value = "1-20")]
    seeds: Seeds,
    /// Population size for --algorithm runs.
    #[arg(long)]
    pop: Option<usize>,
    /// Iterations for --algorithm runs.
    #[arg(long)]
    iters: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Grid points per decision axis.
    #[arg(long, default_value_t = 64)]
    resolution: usize,
}

fn parse_external(text: &str) -> std::result::Result<(String, PathBuf), String> {
    match text.split_once('=') {
        Some((name, dir)) if !name.is_empty() && !dir.is_empty() => Ok((name.to_string(), PathBuf::from(dir))),
        _ => Err(format!("expected NAME=DIR, got `{text}`")),
    }
}

fn params(pop: Option<usize>, iters: Option<usize>, mut solver: SolverParams, mut nsga2: Nsga2Params) -> (SolverParams, Nsga2Params) {
    if let Some(p) = pop {
        solver.pop_size = p;
        nsga2.pop_size = p;
    }
    if let Some(i) = iters {
        solver.max_iters = i;
        nsga2.max_gens = i;
    }
    (solver, nsga2)
}

/// Same population and generation count for both algorithms.
fn matched_params(pop: Option<usize>, iters: Option<usize>) -> (SolverParams, Nsga2Params) {
    let solver = SolverParams::default();
    let nsga2 = Nsga2Params {
        pop_size: solver.pop_size,
        max_gens: solver.max_iters,
        ..Nsga2Params::default()
    };
    params(pop, iters, solver, nsga2)
}

fn out_dir(cli_out: &Option<PathBuf>, manifest_out: Option<&Path>) -> PathBuf {
    cli_out
        .clone()
        .or_else(|| manifest_out.map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn job_from_manifest(m: &RunManifest, out: PathBuf) -> Result<SolveJob> {
    Ok(SolveJob {
        scenario: load_scenario(&m.scenario)?,
        algorithm: m.algorithm,
        solver: m.solver,
        nsga2: m.nsga2,
        seeds: m.seeds.clone(),
        out,
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => {
            let manifest = args.manifest.as_deref().map(RunManifest::from_path).transpose()?;
            let scenario = args.scenario.load(manifest.as_ref().map(|m| m.scenario.as_str()))?;
            let (solver, nsga2) = match &manifest {
                Some(m) => params(args.run.pop, args.run.iters, m.solver, m.nsga2),
                None => matched_params(args.run.pop, args.run.iters),
            };
            let mut solver = solver;
            if let Some(mode) = args.run.bcs {
                solver.bcs_mode = mode;
            }
            let job = SolveJob {
                scenario,
                algorithm: args
                    .run
                    .algorithm
                    .or(manifest.as_ref().map(|m| m.algorithm))
                    .unwrap_or(Algorithm::BcsGde),
                solver,
                nsga2,
                seeds: args
                    .run
                    .seeds
                    .map(|s| s.0)
                    .or(manifest.as_ref().map(|m| m.seeds.clone()))
                    .unwrap_or_else(|| vec![solver.seed]),
                out: out_dir(&cli.out, manifest.as_ref().and_then(|m| m.output_dir.as_deref())),
            };
            commands::solve(&job)
        }
        Command::Reference(args) => {
            let scenario = args.scenario.load(None)?;
            commands::reference(&scenario, args.front.as_deref(), args.bcs, &out_dir(&cli.out, None))
        }
        Command::Compare(args) => {
            let mut contenders = Vec::new();
            if !args.algorithms.is_empty() {
                let scenario = args.scenario.load(None)?;
                let (solver, nsga2) = matched_params(args.pop, args.iters);
                for &algorithm in &args.algorithms {
                    let job = SolveJob {
                        scenario: scenario.clone(),
                        algorithm,
                        solver,
                        nsga2,
                        seeds: args.seeds.0.clone(),
                        out: PathBuf::new(),
                    };
                    contenders.push(Contender::run(algorithm.to_string(), &job)?);
                }
            }
            for path in &args.manifests {
                let m = RunManifest::from_path(path)?;
                let job = job_from_manifest(&m, PathBuf::new())?;
                contenders.push(Contender::run(m.label(), &job)?);
            }
            for (name, dir) in &args.externals {
                contenders.push(Contender::external(name.clone(), dir)?);
            }
            commands::compare(&contenders, &out_dir(&cli.out, None))
        }
        Command::Oracle(args) => {
            let scenario = args.scenario.load(None)?;
            commands::oracle(&scenario, args.resolution, &out_dir(&cli.out, None))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let infeasible = err
                .chain()
                .any(|e| matches!(e.downcast_ref::<cchp::Error>(), Some(cchp::Error::NoFeasible { .. })));
            ExitCode::from(if infeasible { 2 } else { 1 })
        }
    }
}
