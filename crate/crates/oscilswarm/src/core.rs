//! Shared contracts: objective functions, budget accounting, seeded
//! randomness, and the optimizer interface.
//!
//! Every optimizer in this crate consumes exactly one objective evaluation
//! per [`checked_evaluate`] call, draws randomness only through
//! [`RngStream`], and reports its run as a [`RunRecord`]. Those three rules
//! make every run a pure function of `(config, spec, budget, seed)`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A shareable objective evaluator.
pub type Objective = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A benchmark objective: evaluator, dimension, initialization box, and the
/// known minimum value.
#[derive(Clone)]
pub struct ObjectiveSpec {
    name: String,
    dimension: usize,
    init_box: Vec<(f64, f64)>,
    f_min: f64,
    known_minimizer: Option<Vec<f64>>,
    evaluate: Objective,
}

impl fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveSpec")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("init_box", &self.init_box)
            .field("f_min", &self.f_min)
            .finish_non_exhaustive()
    }
}

impl ObjectiveSpec {
    /// Builds a spec, checking that every interval satisfies `lo < hi`.
    pub fn new(
        name: impl Into<String>,
        init_box: Vec<(f64, f64)>,
        f_min: f64,
        evaluate: Objective,
    ) -> Result<Self> {
        for &(lo, hi) in &init_box {
            if !(lo < hi) {
                return Err(Error::InvalidInterval { lo, hi });
            }
        }
        Ok(Self {
            name: name.into(),
            dimension: init_box.len(),
            init_box,
            f_min,
            known_minimizer: None,
            evaluate,
        })
    }

    /// Attaches the coordinates of a known minimizer (used by tests and
    /// reporting; optimizers never read it).
    pub fn with_known_minimizer(mut self, x: Vec<f64>) -> Self {
        self.known_minimizer = Some(x);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Per-dimension closed initialization intervals `[lo, hi]`.
    pub fn init_box(&self) -> &[(f64, f64)] {
        &self.init_box
    }

    /// Known minimum value of the objective.
    pub fn f_min(&self) -> f64 {
        self.f_min
    }

    pub fn known_minimizer(&self) -> Option<&[f64]> {
        self.known_minimizer.as_deref()
    }

    /// Raw evaluation without budget accounting. Prefer [`checked_evaluate`]
    /// inside optimizers.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        (self.evaluate)(x)
    }
}

/// Counts objective evaluations against a hard limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetMeter {
    limit: usize,
    used: usize,
}

impl BudgetMeter {
    pub fn new(limit: usize) -> Self {
        Self { limit, used: 0 }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn remaining(&self) -> usize {
        self.limit - self.used
    }
}

/// Evaluates `spec` at `x`, consuming exactly one unit of budget.
///
/// Fails with [`Error::BudgetExhausted`] when the meter is already at its
/// limit — the signal for an optimizer to terminate — and with
/// [`Error::DimensionMismatch`] when `x` has the wrong length.
pub fn checked_evaluate(spec: &ObjectiveSpec, x: &[f64], meter: &mut BudgetMeter) -> Result<f64> {
    if x.len() != spec.dimension() {
        return Err(Error::DimensionMismatch {
            expected: spec.dimension(),
            got: x.len(),
        });
    }
    if meter.used >= meter.limit {
        return Err(Error::BudgetExhausted);
    }
    meter.used += 1;
    Ok(spec.evaluate(x))
}

/// A seeded, splittable random stream.
///
/// Streams derived from the same `(seed, index)` pair are bit-identical, and
/// distinct indices yield independent sequences, so per-particle substreams
/// make run reproducibility independent of evaluation order.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    /// Master stream for a run (substream index 0).
    pub fn from_seed(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// The `index`-th independent substream of `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { rng }
    }

    /// A draw uniform on `[lo, hi)`; degenerate `lo == hi` returns `lo`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(lo + (hi - lo) * self.rng.random::<f64>())
    }

    /// A draw uniform on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// A draw uniform over `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}

/// Full account of one optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub optimizer: String,
    pub objective: String,
    pub dimension: usize,
    pub budget: usize,
    pub seed: u64,
    /// JSON snapshot of the optimizer configuration that produced the run.
    pub config: String,
    /// `(evaluations_used, best_value_so_far)` after initialization and after
    /// every completed sweep/generation. Strictly increasing in evaluations,
    /// non-increasing in value.
    pub trace: Vec<(usize, f64)>,
    pub final_position: Vec<f64>,
    pub final_value: f64,
}

impl RunRecord {
    /// Total objective evaluations the run consumed.
    pub fn evaluations_used(&self) -> usize {
        self.trace.last().map_or(0, |&(used, _)| used)
    }
}

/// The interface every optimizer implements.
///
/// `run` must be deterministic in `(self, spec, budget, seed)` and must not
/// evaluate the objective more than `budget` times.
pub trait Optimizer {
    /// Registry name, e.g. `"hopso"`.
    fn name(&self) -> &str;

    /// Population size the optimizer would use for this problem; the budget
    /// must cover at least one full evaluation sweep of it.
    fn population(&self, dimension: usize, budget: usize) -> usize;

    fn run(&self, spec: &ObjectiveSpec, budget: usize, seed: u64) -> Result<RunRecord>;
}

/// Dispatch shell shared by all optimizers: validates the budget against the
/// population size, then delegates.
pub fn run_optimizer<O: Optimizer + ?Sized>(
    optimizer: &O,
    spec: &ObjectiveSpec,
    budget: usize,
    seed: u64,
) -> Result<RunRecord> {
    let population = optimizer.population(spec.dimension(), budget);
    if budget < population {
        return Err(Error::BudgetTooSmall { budget, population });
    }
    optimizer.run(spec, budget, seed)
}
