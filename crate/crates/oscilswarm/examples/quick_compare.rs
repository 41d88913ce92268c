//! Runs a small seeded comparison of the three optimizers on a couple of
//! benchmark functions and prints the aggregated table as Markdown.
//!
//! ```sh
//! cargo run --release --example quick_compare
//! ```

use oscilswarm::harness::io::{emit_table, TableFormat};
use oscilswarm::harness::plan::{ExperimentPlan, OptimizerConfig, PlanRow};
use oscilswarm::harness::{execute_plan, ExecutionMode};

fn main() -> oscilswarm::Result<()> {
    let mut rows = Vec::new();
    for function in ["sphere", "rastrigin", "beale"] {
        for optimizer in ["hopso", "pso", "de"] {
            rows.push(PlanRow {
                optimizer: OptimizerConfig::by_name(optimizer)?,
                function: function.to_string(),
                dimension: None,
                budget: 2000,
                runs: 10,
                base_seed: 42,
            });
        }
    }
    let plan = ExperimentPlan {
        rows,
        results_path: None,
        stats_path: None,
    };

    let outcome = execute_plan(&plan, ExecutionMode::Parallel { jobs: None })?;
    print!("{}", emit_table(&outcome.stats, TableFormat::Markdown));
    Ok(())
}
