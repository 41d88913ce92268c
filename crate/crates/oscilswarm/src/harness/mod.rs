//! Experiment orchestration: expands declarative plans into seeded runs,
//! executes them serially or on a worker pool, and reduces the results to
//! box-plot statistics.
//!
//! Runs are embarrassingly parallel. Tasks are indexed by `(row, run)` and
//! results are collected in that order regardless of completion order, so
//! serial and parallel execution produce identical output down to the byte.

pub mod io;
pub mod plan;
pub mod stats;

pub use io::{
    emit_table, external_stats, import_external_results, read_results_csv, write_results_csv,
    write_stats_csv, ExternalResult, TableFormat, RESULTS_HEADER, STATS_HEADER,
};
pub use plan::{default_budget, ExperimentPlan, OptimizerConfig, PlanRow};
pub use stats::{summarize, SummaryStats};

use serde::{Deserialize, Serialize};

use crate::core::{run_optimizer, RunRecord};
use crate::error::{Error, Result};
use crate::hopso::{Damping, HopsoConfig};
use crate::testbed;

/// How a plan's runs are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecutionMode {
    /// One run at a time, in task order.
    Serial,
    /// Runs distributed over a worker pool; `jobs = None` sizes the pool
    /// automatically. Without the `parallel` feature this falls back to
    /// serial execution and produces the same output either way.
    Parallel { jobs: Option<usize> },
}

/// The result of one seeded run, successful or not.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub optimizer: String,
    pub function: String,
    pub dimension: usize,
    pub budget: usize,
    pub seed: u64,
    /// The run record, or the failure rendered as a message.
    pub outcome: std::result::Result<RunRecord, String>,
}

impl RunOutcome {
    /// Best objective value found, if the run succeeded.
    pub fn final_value(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|r| r.final_value)
    }

    /// Evaluations consumed; zero for failed runs.
    pub fn evaluations_used(&self) -> usize {
        self.outcome.as_ref().map_or(0, |r| r.evaluations_used())
    }

    /// `"ok"` or `"failed"`, as written to the results CSV.
    pub fn status_str(&self) -> &'static str {
        if self.outcome.is_ok() {
            "ok"
        } else {
            "failed"
        }
    }
}

/// One line of a comparison table: a function/optimizer cell with its
/// summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub function: String,
    pub budget: usize,
    pub f_min: f64,
    pub optimizer: String,
    #[serde(flatten)]
    pub stats: SummaryStats,
}

/// Everything a plan execution produces.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanOutcome {
    /// One entry per (row, run), in plan order.
    pub runs: Vec<RunOutcome>,
    /// One entry per plan row that had at least one successful run.
    pub stats: Vec<StatsRow>,
}

fn run_task(row: &PlanRow, seed: u64) -> RunOutcome {
    let optimizer = row.optimizer.name().to_string();
    match testbed::spec_for(&row.function, row.dimension) {
        Err(e) => RunOutcome {
            optimizer,
            function: row.function.clone(),
            dimension: row.dimension.unwrap_or(0),
            budget: row.budget,
            seed,
            outcome: Err(e.to_string()),
        },
        Ok(spec) => {
            let outcome = run_optimizer(row.optimizer.as_optimizer(), &spec, row.budget, seed)
                .map_err(|e| e.to_string());
            RunOutcome {
                optimizer,
                function: row.function.clone(),
                dimension: spec.dimension(),
                budget: row.budget,
                seed,
                outcome,
            }
        }
    }
}

fn serial_run(plan: &ExperimentPlan, tasks: &[(usize, u64)]) -> Vec<RunOutcome> {
    tasks
        .iter()
        .map(|&(i, seed)| run_task(&plan.rows[i], seed))
        .collect()
}

#[cfg(feature = "parallel")]
fn parallel_run(
    plan: &ExperimentPlan,
    tasks: &[(usize, u64)],
    jobs: Option<usize>,
) -> Result<Vec<RunOutcome>> {
    use rayon::prelude::*;
    let work = || {
        tasks
            .par_iter()
            .map(|&(i, seed)| run_task(&plan.rows[i], seed))
            .collect()
    };
    match jobs {
        None => Ok(work()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidPlan(format!("worker pool: {e}")))?;
            Ok(pool.install(work))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_run(
    plan: &ExperimentPlan,
    tasks: &[(usize, u64)],
    _jobs: Option<usize>,
) -> Result<Vec<RunOutcome>> {
    Ok(serial_run(plan, tasks))
}

/// Executes every run of the plan and summarizes each row.
///
/// Run `k` of a row uses seed `base_seed + k`. A failing run is recorded
/// with its error message and does not abort the remaining runs; a row's
/// statistics cover its successful runs only.
pub fn execute_plan(plan: &ExperimentPlan, mode: ExecutionMode) -> Result<PlanOutcome> {
    if plan.rows.is_empty() {
        return Err(Error::InvalidPlan("plan has no rows".into()));
    }
    let tasks: Vec<(usize, u64)> = plan
        .rows
        .iter()
        .enumerate()
        .flat_map(|(i, row)| (0..row.runs).map(move |k| (i, row.base_seed.wrapping_add(k as u64))))
        .collect();

    let runs = match mode {
        ExecutionMode::Serial => serial_run(plan, &tasks),
        ExecutionMode::Parallel { jobs } => parallel_run(plan, &tasks, jobs)?,
    };

    let mut stats = Vec::new();
    let mut cursor = 0;
    for row in &plan.rows {
        let slice = &runs[cursor..cursor + row.runs];
        cursor += row.runs;
        let values: Vec<f64> = slice.iter().filter_map(RunOutcome::final_value).collect();
        if values.is_empty() {
            continue;
        }
        // A successful run implies the registry lookup resolves.
        let f_min = testbed::spec_for(&row.function, row.dimension).map_or(f64::NAN, |s| s.f_min());
        stats.push(StatsRow {
            function: row.function.clone(),
            budget: row.budget,
            f_min,
            optimizer: row.optimizer.name().to_string(),
            stats: summarize(&values)?,
        });
    }
    Ok(PlanOutcome { runs, stats })
}

/// One sampled point of a scaling-factor study.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub s: f64,
    pub stats: StatsRow,
}

/// Runs the oscillator swarm on one function once per scaling factor in
/// `s_values`, holding everything else fixed.
///
/// Each run derives its damping rate from the row's scaling factor, budget,
/// and swarm size. The returned rows are labeled `hopso[s=<value>]` so
/// emitted tables stay self-describing.
#[allow(clippy::too_many_arguments)]
pub fn scaling_factor_sweep(
    function: &str,
    dimension: Option<usize>,
    s_values: &[f64],
    budget: Option<usize>,
    runs: usize,
    base_seed: u64,
    base: &HopsoConfig,
    mode: ExecutionMode,
) -> Result<Vec<SweepPoint>> {
    if s_values.is_empty() {
        return Err(Error::EmptyInput);
    }
    // Surface unknown functions or bad dimensions before spending any runs.
    testbed::spec_for(function, dimension)?;
    let budget = budget.unwrap_or_else(|| default_budget(function));
    let rows = s_values
        .iter()
        .map(|&s| PlanRow {
            optimizer: OptimizerConfig::Hopso(HopsoConfig {
                damping: Damping::Scale(s),
                ..*base
            }),
            function: function.to_string(),
            dimension,
            budget,
            runs,
            base_seed,
        })
        .collect();
    let plan = ExperimentPlan {
        rows,
        results_path: None,
        stats_path: None,
    };
    let outcome = execute_plan(&plan, mode)?;
    if outcome.stats.len() != s_values.len() {
        let first_failure = outcome
            .runs
            .iter()
            .find_map(|r| r.outcome.as_ref().err().cloned())
            .unwrap_or_else(|| "no successful runs".into());
        return Err(Error::InvalidPlan(format!(
            "scaling sweep incomplete: {first_failure}"
        )));
    }
    Ok(s_values
        .iter()
        .zip(outcome.stats)
        .map(|(&s, mut stats)| {
            stats.optimizer = format!("hopso[s={s}]");
            SweepPoint { s, stats }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::PsoConfig;

    fn tiny_plan() -> ExperimentPlan {
        ExperimentPlan {
            rows: vec![PlanRow {
                optimizer: OptimizerConfig::Pso(PsoConfig::default()),
                function: "sphere".into(),
                dimension: Some(2),
                budget: 100,
                runs: 1,
                base_seed: 7,
            }],
            results_path: None,
            stats_path: None,
        }
    }

    #[test]
    fn single_run_plan_yields_one_record_and_degenerate_stats() {
        let out = execute_plan(&tiny_plan(), ExecutionMode::Serial).unwrap();
        assert_eq!(out.runs.len(), 1);
        assert_eq!(out.runs[0].status_str(), "ok");
        assert_eq!(out.runs[0].seed, 7);
        assert_eq!(out.stats.len(), 1);
        let s = &out.stats[0].stats;
        assert_eq!(s.n_runs, 1);
        assert_eq!(s.mean, s.median);
        assert_eq!(s.mean, out.runs[0].final_value().unwrap());
        assert_eq!(out.stats[0].f_min, 0.0);
    }

    #[test]
    fn execution_is_deterministic() {
        let mut plan = tiny_plan();
        plan.rows[0].runs = 4;
        let a = execute_plan(&plan, ExecutionMode::Serial).unwrap();
        let b = execute_plan(&plan, ExecutionMode::Serial).unwrap();
        assert_eq!(a, b);
        let seeds: Vec<u64> = a.runs.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![7, 8, 9, 10]);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_serial() {
        let mut plan = tiny_plan();
        plan.rows[0].runs = 6;
        let serial = execute_plan(&plan, ExecutionMode::Serial).unwrap();
        for jobs in [None, Some(1), Some(3)] {
            let parallel = execute_plan(&plan, ExecutionMode::Parallel { jobs }).unwrap();
            assert_eq!(serial, parallel, "jobs {jobs:?}");
        }
    }

    #[test]
    fn failing_rows_do_not_poison_the_plan() {
        let mut plan = tiny_plan();
        plan.rows.push(PlanRow {
            optimizer: OptimizerConfig::Pso(PsoConfig::default()),
            function: "does-not-exist".into(),
            dimension: None,
            budget: 100,
            runs: 2,
            base_seed: 0,
        });
        let out = execute_plan(&plan, ExecutionMode::Serial).unwrap();
        assert_eq!(out.runs.len(), 3);
        assert_eq!(out.runs[0].status_str(), "ok");
        assert_eq!(out.runs[1].status_str(), "failed");
        assert_eq!(out.runs[1].evaluations_used(), 0);
        assert!(out.runs[1]
            .outcome
            .as_ref()
            .unwrap_err()
            .contains("unknown function"));
        // Only the healthy row produces statistics.
        assert_eq!(out.stats.len(), 1);
        assert_eq!(out.stats[0].function, "sphere");
    }

    #[test]
    fn budget_smaller_than_population_fails_the_row() {
        let mut plan = tiny_plan();
        plan.rows[0].budget = 5;
        let out = execute_plan(&plan, ExecutionMode::Serial).unwrap();
        assert_eq!(out.runs[0].status_str(), "failed");
        assert!(out.stats.is_empty());
    }

    #[test]
    fn empty_plan_is_rejected() {
        let plan = ExperimentPlan::default();
        assert!(matches!(
            execute_plan(&plan, ExecutionMode::Serial),
            Err(Error::InvalidPlan(_))
        ));
    }

    #[test]
    fn degenerate_sweep_matches_a_plain_plan_row() {
        let base = HopsoConfig::default();
        let sweep = scaling_factor_sweep(
            "sphere",
            Some(2),
            &[10.0],
            Some(200),
            2,
            11,
            &base,
            ExecutionMode::Serial,
        )
        .unwrap();
        assert_eq!(sweep.len(), 1);
        assert_eq!(sweep[0].s, 10.0);
        assert_eq!(sweep[0].stats.optimizer, "hopso[s=10]");

        let plan = ExperimentPlan {
            rows: vec![PlanRow {
                optimizer: OptimizerConfig::Hopso(HopsoConfig::default()),
                function: "sphere".into(),
                dimension: Some(2),
                budget: 200,
                runs: 2,
                base_seed: 11,
            }],
            results_path: None,
            stats_path: None,
        };
        let direct = execute_plan(&plan, ExecutionMode::Serial).unwrap();
        assert_eq!(sweep[0].stats.stats, direct.stats[0].stats);
    }

    #[test]
    fn sweep_rejects_empty_s_list_and_unknown_functions() {
        let base = HopsoConfig::default();
        assert!(matches!(
            scaling_factor_sweep(
                "sphere",
                None,
                &[],
                None,
                1,
                0,
                &base,
                ExecutionMode::Serial
            ),
            Err(Error::EmptyInput)
        ));
        assert!(scaling_factor_sweep(
            "nope",
            None,
            &[1.0],
            None,
            1,
            0,
            &base,
            ExecutionMode::Serial
        )
        .is_err());
    }
}
