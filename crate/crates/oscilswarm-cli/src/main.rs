//! Command-line front end for the oscilswarm toolkit.
//!
//! Subcommands: `run` (one optimizer on one function, results CSV),
//! `compare` (a grid or declarative plan reduced to a comparison table),
//! `sweep` (scaling-factor study), `dynamics` (stability-analysis CSVs), and
//! `list-functions`.
//!
//! Every invocation is deterministic in its flags: repeated invocations
//! produce byte-identical files, whether runs execute serially (`--serial`)
//! or on a worker pool (`--jobs`). Exit codes: 0 success, 1 runtime failure,
//! 2 usage error.

// Flag validation spells checks as `!(x > 0.0)` so NaN fails closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use oscilswarm::baselines::{DeConfig, MutationFactor, PsoConfig};
use oscilswarm::dynamics;
use oscilswarm::harness::{
    self, emit_table, execute_plan, external_stats, import_external_results, scaling_factor_sweep,
    write_results_csv, write_stats_csv, ExecutionMode, ExperimentPlan, OptimizerConfig, PlanRow,
    StatsRow, TableFormat,
};
use oscilswarm::hopso::{Damping, HopsoConfig};
use oscilswarm::testbed;

/// Fallback seed when neither `--seed` nor `OSCILSWARM_SEED` is given.
const DEFAULT_SEED: u64 = 42;
const DEFAULT_RUNS: usize = 50;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(error)) => {
            eprintln!("error: {error:#}");
            ExitCode::from(1)
        }
    }
}

/// A failed invocation: scripting relies on usage errors exiting 2 and
/// runtime errors exiting 1.
enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(error: E) -> Self {
        Self::Runtime(error.into())
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

type CliResult = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "oscilswarm",
    version,
    about = "Oscillator-swarm global optimization toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one optimizer on one benchmark function and write per-run results.
    Run(RunArgs),
    /// Run an optimizer/function grid (or a TOML plan) and emit a comparison table.
    Compare(CompareArgs),
    /// Study the oscillator swarm's damping scale on one function.
    Sweep(SweepArgs),
    /// Emit stability-analysis data: the singular-value sweep and optional
    /// random matrix-product trajectories.
    Dynamics(DynamicsArgs),
    /// List the benchmark functions and their reference setups.
    ListFunctions,
}

/// Scheduling flags shared by the run-executing subcommands.
#[derive(Args)]
struct ExecArgs {
    /// Worker pool size (defaults to the machine's parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Execute runs one at a time on the calling thread.
    #[arg(long, conflicts_with = "jobs")]
    serial: bool,
}

impl ExecArgs {
    fn mode(&self) -> Result<ExecutionMode, Failure> {
        if self.jobs == Some(0) {
            return Err(usage("--jobs must be at least 1"));
        }
        Ok(if self.serial {
            ExecutionMode::Serial
        } else {
            ExecutionMode::Parallel { jobs: self.jobs }
        })
    }
}

#[derive(Args)]
struct RunArgs {
    /// Optimizer: hopso, pso, or de.
    #[arg(long)]
    optimizer: String,
    /// Benchmark function name (see list-functions).
    #[arg(long)]
    function: String,
    /// Problem dimension (defaults to the function's reference dimension).
    #[arg(long)]
    dim: Option<usize>,
    /// Evaluation budget per run (defaults to the function's reference budget).
    #[arg(long)]
    budget: Option<usize>,
    /// Number of seeded repetitions.
    #[arg(long)]
    runs: Option<usize>,
    /// Base seed; run k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    /// Results CSV destination.
    #[arg(long)]
    out: PathBuf,

    /// Swarm size (hopso, pso).
    #[arg(long)]
    particles: Option<usize>,
    /// Damping scale s, from which each run derives its rate (hopso).
    #[arg(long)]
    scale: Option<f64>,
    /// Fixed damping rate, overriding the scale rule (hopso).
    #[arg(long, conflicts_with = "scale")]
    lambda: Option<f64>,
    /// Cognitive weight (hopso, pso).
    #[arg(long)]
    c1: Option<f64>,
    /// Social weight (hopso, pso).
    #[arg(long)]
    c2: Option<f64>,
    /// Constriction factor (pso).
    #[arg(long)]
    chi: Option<f64>,
    /// Population size (de).
    #[arg(long)]
    population: Option<usize>,
    /// Crossover rate (de).
    #[arg(long)]
    crossover: Option<f64>,
    /// Fixed mutation factor, replacing the default per-generation dither (de).
    #[arg(long)]
    mutation_f: Option<f64>,

    #[command(flatten)]
    exec: ExecArgs,
}

impl RunArgs {
    /// Builds the optimizer configuration, rejecting flags that do not apply
    /// to the chosen optimizer.
    fn build_config(&self) -> Result<OptimizerConfig, Failure> {
        let forbid = |flag: Option<()>, name: &str| -> Result<(), Failure> {
            match flag {
                Some(()) => Err(usage(format!(
                    "--{name} does not apply to optimizer {:?}",
                    self.optimizer
                ))),
                None => Ok(()),
            }
        };
        match self.optimizer.as_str() {
            "hopso" => {
                forbid(self.chi.map(drop), "chi")?;
                forbid(self.population.map(drop), "population")?;
                forbid(self.crossover.map(drop), "crossover")?;
                forbid(self.mutation_f.map(drop), "mutation-f")?;
                let mut config = HopsoConfig::default();
                if let Some(s) = self.scale {
                    if !(s > 0.0) {
                        return Err(usage(format!("--scale must be positive, got {s}")));
                    }
                    config.damping = Damping::Scale(s);
                }
                if let Some(l) = self.lambda {
                    if !(l >= 0.0) {
                        return Err(usage(format!("--lambda must be non-negative, got {l}")));
                    }
                    config.damping = Damping::Lambda(l);
                }
                if let Some(n) = self.particles {
                    if n == 0 {
                        return Err(usage("--particles must be at least 1"));
                    }
                    config.particles = n;
                }
                if let Some(c1) = self.c1 {
                    config.c1 = c1;
                }
                if let Some(c2) = self.c2 {
                    config.c2 = c2;
                }
                Ok(OptimizerConfig::Hopso(config))
            }
            "pso" => {
                forbid(self.scale.map(drop), "scale")?;
                forbid(self.lambda.map(drop), "lambda")?;
                forbid(self.population.map(drop), "population")?;
                forbid(self.crossover.map(drop), "crossover")?;
                forbid(self.mutation_f.map(drop), "mutation-f")?;
                let mut config = PsoConfig::default();
                if let Some(chi) = self.chi {
                    if !(chi > 0.0) {
                        return Err(usage(format!("--chi must be positive, got {chi}")));
                    }
                    config.chi = chi;
                }
                if let Some(n) = self.particles {
                    if n == 0 {
                        return Err(usage("--particles must be at least 1"));
                    }
                    config.particles = n;
                }
                if let Some(c1) = self.c1 {
                    config.c1 = c1;
                }
                if let Some(c2) = self.c2 {
                    config.c2 = c2;
                }
                Ok(OptimizerConfig::Pso(config))
            }
            "de" => {
                forbid(self.particles.map(drop), "particles")?;
                forbid(self.scale.map(drop), "scale")?;
                forbid(self.lambda.map(drop), "lambda")?;
                forbid(self.chi.map(drop), "chi")?;
                forbid(self.c1.map(drop), "c1")?;
                forbid(self.c2.map(drop), "c2")?;
                let mut config = DeConfig::default();
                if self.population.is_some() {
                    config.population = self.population;
                }
                if let Some(cr) = self.crossover {
                    config.crossover = cr;
                }
                if let Some(f) = self.mutation_f {
                    config.mutation = MutationFactor::Fixed(f);
                }
                config.validate().map_err(|e| usage(e.to_string()))?;
                Ok(OptimizerConfig::De(config))
            }
            other => Err(usage(format!(
                "unknown optimizer {other:?}, expected one of: hopso, pso, de"
            ))),
        }
    }
}

#[derive(Args)]
struct CompareArgs {
    /// TOML experiment plan; replaces the grid flags below.
    #[arg(long, conflicts_with_all = ["functions", "optimizers", "runs", "seed"])]
    plan: Option<PathBuf>,
    /// Functions to compare (default: all twelve).
    #[arg(long, value_delimiter = ',')]
    functions: Vec<String>,
    /// Optimizers to compare (default: hopso,pso,de).
    #[arg(long, value_delimiter = ',')]
    optimizers: Vec<String>,
    /// Seeded repetitions per cell.
    #[arg(long)]
    runs: Option<usize>,
    /// Base seed; run k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    /// Table destination (default: standard output).
    #[arg(long)]
    out_table: Option<PathBuf>,
    /// Table format: csv, json, or markdown.
    #[arg(long, default_value = "markdown")]
    format: String,
    /// Additional results CSVs to merge, marked "(external)" in the table.
    #[arg(long)]
    external: Vec<PathBuf>,

    #[command(flatten)]
    exec: ExecArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Benchmark function name.
    #[arg(long)]
    function: String,
    /// Problem dimension (defaults to the function's reference dimension).
    #[arg(long)]
    dim: Option<usize>,
    /// Evaluation budget per run (defaults to the function's reference budget).
    #[arg(long)]
    budget: Option<usize>,
    /// Scaling factors to test, e.g. 0.1,1,10.
    #[arg(long, value_delimiter = ',', required = true)]
    s_values: Vec<f64>,
    /// Seeded repetitions per scaling factor.
    #[arg(long)]
    runs: Option<usize>,
    /// Base seed; run k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    /// Stats CSV destination (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,

    #[command(flatten)]
    exec: ExecArgs,
}

#[derive(Args)]
struct DynamicsArgs {
    /// Constriction factor of the analysed update map; must be positive.
    #[arg(long)]
    chi: f64,
    /// Shared acceleration weight c1 = c2 = c.
    #[arg(long, default_value_t = 2.05)]
    c: f64,
    /// Grid resolution of the singular-value sweep over r in [0, 2].
    #[arg(long, default_value_t = dynamics::SWEEP_DEFAULT_SAMPLES)]
    samples: usize,
    /// Sweep CSV destination.
    #[arg(long)]
    out: PathBuf,
    /// Also write random matrix-product trajectories of this many steps.
    #[arg(long)]
    trajectory_steps: Option<usize>,
    /// Seeds for the trajectories, one output file per seed.
    #[arg(long, value_delimiter = ',', default_value = "42")]
    seeds: Vec<u64>,
    /// Prefix of the trajectory files (default: derived from --out).
    #[arg(long)]
    trajectory_out: Option<String>,
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Dynamics(args) => cmd_dynamics(args),
        Command::ListFunctions => cmd_list_functions(),
    }
}

/// `--seed` flag, else `OSCILSWARM_SEED`, else [`DEFAULT_SEED`].
fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match env::var("OSCILSWARM_SEED") {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            usage(format!(
                "OSCILSWARM_SEED must be an unsigned integer, got {raw:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn resolve_runs(flag: Option<usize>) -> Result<usize, Failure> {
    match flag {
        Some(0) => Err(usage("--runs must be at least 1")),
        Some(runs) => Ok(runs),
        None => Ok(DEFAULT_RUNS),
    }
}

/// Checks a function/dimension pair against the registry before any budget
/// is spent, so typos exit with a usage error.
fn check_function(function: &str, dim: Option<usize>) -> Result<(), Failure> {
    testbed::spec_for(function, dim)
        .map(drop)
        .map_err(|e| usage(e.to_string()))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    fs::write(path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::from)
}

fn cmd_run(args: RunArgs) -> CliResult {
    let optimizer = args.build_config()?;
    check_function(&args.function, args.dim)?;
    let runs = resolve_runs(args.runs)?;
    let base_seed = resolve_seed(args.seed)?;
    let mode = args.exec.mode()?;

    let plan = ExperimentPlan {
        rows: vec![PlanRow {
            optimizer,
            function: args.function.clone(),
            dimension: args.dim,
            budget: args
                .budget
                .unwrap_or_else(|| harness::default_budget(&args.function)),
            runs,
            base_seed,
        }],
        results_path: None,
        stats_path: None,
    };
    let outcome = execute_plan(&plan, mode).map_err(anyhow::Error::from)?;
    if let Some(failed) = outcome.runs.iter().find_map(|r| r.outcome.as_ref().err()) {
        return Err(Failure::Runtime(anyhow::anyhow!("run failed: {failed}")));
    }
    let mut buf = Vec::new();
    write_results_csv(&mut buf, &outcome.runs).map_err(anyhow::Error::from)?;
    write_file(&args.out, &buf)
}

fn cmd_compare(args: CompareArgs) -> CliResult {
    let format: TableFormat = args.format.parse().map_err(|_| {
        usage(format!(
            "unknown table format {:?}, expected csv, json, or markdown",
            args.format
        ))
    })?;
    let mode = args.exec.mode()?;

    let plan = match &args.plan {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentPlan::from_toml(&text)
                .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?
        }
        None => {
            let functions: Vec<String> = if args.functions.is_empty() {
                testbed::function_names()
                    .iter()
                    .map(|s| s.to_string())
                    .collect()
            } else {
                args.functions.clone()
            };
            let optimizer_names: Vec<String> = if args.optimizers.is_empty() {
                vec!["hopso".into(), "pso".into(), "de".into()]
            } else {
                args.optimizers.clone()
            };
            let runs = resolve_runs(args.runs)?;
            let base_seed = resolve_seed(args.seed)?;
            let mut rows = Vec::new();
            for function in &functions {
                check_function(function, None)?;
                for name in &optimizer_names {
                    let optimizer =
                        OptimizerConfig::by_name(name).map_err(|e| usage(e.to_string()))?;
                    rows.push(PlanRow {
                        optimizer,
                        function: function.clone(),
                        dimension: None,
                        budget: harness::default_budget(function),
                        runs,
                        base_seed,
                    });
                }
            }
            ExperimentPlan {
                rows,
                results_path: None,
                stats_path: None,
            }
        }
    };

    let outcome = execute_plan(&plan, mode).map_err(anyhow::Error::from)?;
    for failed in outcome.runs.iter().filter(|r| r.outcome.is_err()) {
        eprintln!(
            "warning: {} on {} (seed {}) failed: {}",
            failed.optimizer,
            failed.function,
            failed.seed,
            failed.outcome.as_ref().unwrap_err()
        );
    }

    let mut table: Vec<StatsRow> = outcome.stats.clone();
    for path in &args.external {
        let imported = import_external_results(path)
            .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        table.extend(external_stats(&imported).map_err(anyhow::Error::from)?);
    }

    if let Some(path) = &plan.results_path {
        let mut buf = Vec::new();
        write_results_csv(&mut buf, &outcome.runs).map_err(anyhow::Error::from)?;
        write_file(Path::new(path), &buf)?;
    }
    if let Some(path) = &plan.stats_path {
        let mut buf = Vec::new();
        write_stats_csv(&mut buf, &table).map_err(anyhow::Error::from)?;
        write_file(Path::new(path), &buf)?;
    }

    let rendered = emit_table(&table, format);
    match &args.out_table {
        Some(path) => write_file(path, rendered.as_bytes()),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> CliResult {
    check_function(&args.function, args.dim)?;
    if let Some(&bad) = args.s_values.iter().find(|&&s| !(s > 0.0)) {
        return Err(usage(format!(
            "scaling factors must be positive, got {bad}"
        )));
    }
    let runs = resolve_runs(args.runs)?;
    let base_seed = resolve_seed(args.seed)?;
    let mode = args.exec.mode()?;

    let sweep = scaling_factor_sweep(
        &args.function,
        args.dim,
        &args.s_values,
        args.budget,
        runs,
        base_seed,
        &HopsoConfig::default(),
        mode,
    )
    .map_err(anyhow::Error::from)?;
    let rows: Vec<StatsRow> = sweep.into_iter().map(|p| p.stats).collect();

    let mut buf = Vec::new();
    write_stats_csv(&mut buf, &rows).map_err(anyhow::Error::from)?;
    match &args.out {
        Some(path) => write_file(path, &buf),
        None => {
            print!("{}", String::from_utf8(buf).expect("csv is utf-8"));
            Ok(())
        }
    }
}

fn cmd_dynamics(args: DynamicsArgs) -> CliResult {
    if !(args.chi > 0.0) {
        return Err(usage(format!("--chi must be positive, got {}", args.chi)));
    }
    if args.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    if args.trajectory_steps == Some(0) {
        return Err(usage("--trajectory-steps must be at least 1"));
    }

    let rows = dynamics::singular_value_sweep(args.chi, args.c, args.samples);
    let mut buf = Vec::new();
    dynamics::write_sweep_csv(&mut buf, &rows).map_err(anyhow::Error::from)?;
    write_file(&args.out, &buf)?;

    if let Some(steps) = args.trajectory_steps {
        let prefix = args
            .trajectory_out
            .clone()
            .unwrap_or_else(|| format!("{}-trajectory-", args.out.with_extension("").display()));
        for &seed in &args.seeds {
            let norms = dynamics::random_product_trajectory(args.chi, args.c, args.c, steps, seed);
            let mut buf = Vec::new();
            dynamics::write_trajectory_csv(&mut buf, &norms).map_err(anyhow::Error::from)?;
            write_file(Path::new(&format!("{prefix}{seed}.csv")), &buf)?;
        }
    }
    Ok(())
}

fn cmd_list_functions() -> CliResult {
    for info in testbed::function_infos() {
        let dimension = if info.fixed_dimension {
            format!("d={} (fixed)", info.default_dimension)
        } else {
            format!("d={}", info.default_dimension)
        };
        println!(
            "{:<16} {:<14} box=[{}, {}] f_min={}",
            info.name, dimension, info.init_lo, info.init_hi, info.f_min
        );
    }
    Ok(())
}
