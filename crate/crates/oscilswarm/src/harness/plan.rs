//! Declarative experiment plans.
//!
//! A plan is a TOML document with optional plan-wide defaults and one
//! `[[row]]` table per (optimizer, function) cell:
//!
//! ```toml
//! runs = 50
//! seed = 42
//!
//! [[row]]
//! optimizer = "hopso"
//! function = "michalewicz"
//! params = { damping = { scale = 0.1 } }
//!
//! [[row]]
//! optimizer = "de"
//! function = "sphere"
//! budget = 1000
//! ```
//!
//! Omitted budgets fall back to [`default_budget`]; omitted dimensions fall
//! back to each function's reference dimension.

use serde::{Deserialize, Serialize};

use crate::baselines::{DeConfig, PsoConfig};
use crate::core::Optimizer;
use crate::error::{Error, Result};
use crate::hopso::HopsoConfig;
use crate::testbed;

/// Functions benchmarked at a 1000-evaluation budget; every other function
/// defaults to 10000.
const SHORT_BUDGET_FUNCTIONS: [&str; 3] = ["beale", "goldstein-price", "sphere"];

/// Reference evaluation budget for a function.
pub fn default_budget(function: &str) -> usize {
    if SHORT_BUDGET_FUNCTIONS.contains(&function) {
        1000
    } else {
        10_000
    }
}

/// Configuration of any of the bundled optimizers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerConfig {
    Hopso(HopsoConfig),
    Pso(PsoConfig),
    De(DeConfig),
}

impl OptimizerConfig {
    /// Builds a default-configured optimizer from its registry name.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "hopso" => Ok(Self::Hopso(HopsoConfig::default())),
            "pso" => Ok(Self::Pso(PsoConfig::default())),
            "de" => Ok(Self::De(DeConfig::default())),
            other => Err(Error::UnknownOptimizer(other.to_string())),
        }
    }

    /// The underlying optimizer.
    pub fn as_optimizer(&self) -> &dyn Optimizer {
        match self {
            Self::Hopso(c) => c,
            Self::Pso(c) => c,
            Self::De(c) => c,
        }
    }

    /// Registry name of the configured optimizer.
    pub fn name(&self) -> &str {
        self.as_optimizer().name()
    }
}

/// One cell of an experiment: an optimizer on a function at a budget.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanRow {
    pub optimizer: OptimizerConfig,
    pub function: String,
    /// `None` uses the function's reference dimension.
    pub dimension: Option<usize>,
    pub budget: usize,
    pub runs: usize,
    pub base_seed: u64,
}

/// A full experiment: rows plus optional output destinations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentPlan {
    pub rows: Vec<PlanRow>,
    pub results_path: Option<String>,
    pub stats_path: Option<String>,
}

impl ExperimentPlan {
    /// Parses a TOML plan document.
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawPlan = toml::from_str(text).map_err(|e| Error::InvalidPlan(e.to_string()))?;
        let mut rows = Vec::with_capacity(raw.row.len());
        for row in raw.row {
            rows.push(row.resolve(raw.runs, raw.seed)?);
        }
        if rows.is_empty() {
            return Err(Error::InvalidPlan("plan has no rows".into()));
        }
        Ok(Self {
            rows,
            results_path: raw.results,
            stats_path: raw.stats,
        })
    }

    /// The default comparison: every bundled optimizer on every testbed
    /// function at reference dimensions and budgets.
    pub fn full_comparison(runs: usize, base_seed: u64) -> Self {
        let mut rows = Vec::new();
        for function in testbed::function_names() {
            for optimizer in [
                OptimizerConfig::Hopso(HopsoConfig::default()),
                OptimizerConfig::Pso(PsoConfig::default()),
                OptimizerConfig::De(DeConfig::default()),
            ] {
                rows.push(PlanRow {
                    optimizer,
                    function: function.to_string(),
                    dimension: None,
                    budget: default_budget(function),
                    runs,
                    base_seed,
                });
            }
        }
        Self {
            rows,
            results_path: None,
            stats_path: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlan {
    /// Plan-wide default run count.
    runs: Option<usize>,
    /// Plan-wide default base seed.
    seed: Option<u64>,
    results: Option<String>,
    stats: Option<String>,
    #[serde(default)]
    row: Vec<RawRow>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    optimizer: String,
    function: String,
    dimension: Option<usize>,
    budget: Option<usize>,
    runs: Option<usize>,
    seed: Option<u64>,
    /// Optimizer-specific parameter overrides.
    params: Option<toml::Table>,
}

impl RawRow {
    fn resolve(self, default_runs: Option<usize>, default_seed: Option<u64>) -> Result<PlanRow> {
        let optimizer = match self.params {
            None => OptimizerConfig::by_name(&self.optimizer)?,
            Some(params) => {
                let bad_params = |e: toml::de::Error| Error::InvalidPlan(e.to_string());
                match self.optimizer.as_str() {
                    "hopso" => OptimizerConfig::Hopso(params.try_into().map_err(bad_params)?),
                    "pso" => OptimizerConfig::Pso(params.try_into().map_err(bad_params)?),
                    "de" => OptimizerConfig::De(params.try_into().map_err(bad_params)?),
                    other => return Err(Error::UnknownOptimizer(other.to_string())),
                }
            }
        };
        let runs = self.runs.or(default_runs).unwrap_or(50);
        if runs == 0 {
            return Err(Error::InvalidPlan("run count must be positive".into()));
        }
        Ok(PlanRow {
            optimizer,
            budget: self
                .budget
                .unwrap_or_else(|| default_budget(&self.function)),
            function: self.function,
            dimension: self.dimension,
            runs,
            base_seed: self.seed.or(default_seed).unwrap_or(42),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopso::Damping;

    #[test]
    fn minimal_plan_fills_defaults() {
        let plan = ExperimentPlan::from_toml(
            r#"
            [[row]]
            optimizer = "hopso"
            function = "sphere"
            "#,
        )
        .unwrap();
        assert_eq!(plan.rows.len(), 1);
        let row = &plan.rows[0];
        assert_eq!(row.budget, 1000);
        assert_eq!(row.runs, 50);
        assert_eq!(row.base_seed, 42);
        assert_eq!(row.optimizer.name(), "hopso");
        assert_eq!(row.dimension, None);
    }

    #[test]
    fn plan_defaults_flow_into_rows() {
        let plan = ExperimentPlan::from_toml(
            r#"
            runs = 7
            seed = 99
            results = "out/results.csv"

            [[row]]
            optimizer = "pso"
            function = "levy"

            [[row]]
            optimizer = "de"
            function = "rastrigin"
            runs = 3
            seed = 5
            budget = 2000
            "#,
        )
        .unwrap();
        assert_eq!(plan.results_path.as_deref(), Some("out/results.csv"));
        assert_eq!(plan.rows[0].runs, 7);
        assert_eq!(plan.rows[0].base_seed, 99);
        assert_eq!(plan.rows[0].budget, 10_000);
        assert_eq!(plan.rows[1].runs, 3);
        assert_eq!(plan.rows[1].base_seed, 5);
        assert_eq!(plan.rows[1].budget, 2000);
    }

    #[test]
    fn optimizer_params_override_defaults() {
        let plan = ExperimentPlan::from_toml(
            r#"
            [[row]]
            optimizer = "hopso"
            function = "michalewicz"
            params = { damping = { scale = 0.1 }, particles = 10 }
            "#,
        )
        .unwrap();
        match plan.rows[0].optimizer {
            OptimizerConfig::Hopso(c) => {
                assert_eq!(c.damping, Damping::Scale(0.1));
                assert_eq!(c.particles, 10);
                assert_eq!(c.m, 2.05);
            }
            _ => panic!("expected hopso"),
        }
    }

    #[test]
    fn bad_plans_are_rejected() {
        assert!(ExperimentPlan::from_toml("").is_err());
        assert!(ExperimentPlan::from_toml(
            r#"
            [[row]]
            optimizer = "annealing"
            function = "sphere"
            "#
        )
        .is_err());
        // Misspelled parameter names must not pass silently.
        assert!(ExperimentPlan::from_toml(
            r#"
            [[row]]
            optimizer = "hopso"
            function = "sphere"
            params = { particle = 10 }
            "#
        )
        .is_err());
        assert!(ExperimentPlan::from_toml(
            r#"
            [[row]]
            optimizer = "pso"
            function = "sphere"
            runs = 0
            "#
        )
        .is_err());
    }

    #[test]
    fn full_comparison_covers_the_grid() {
        let plan = ExperimentPlan::full_comparison(50, 42);
        assert_eq!(plan.rows.len(), 36);
        assert!(plan.rows.iter().all(|r| r.runs == 50 && r.base_seed == 42));
        let sphere_rows: Vec<_> = plan
            .rows
            .iter()
            .filter(|r| r.function == "sphere")
            .collect();
        assert_eq!(sphere_rows.len(), 3);
        assert!(sphere_rows.iter().all(|r| r.budget == 1000));
    }
}
