//! Error types shared across the crate.

use thiserror::Error;

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// The evaluation budget was already spent when another evaluation was
    /// requested; optimizers treat this as the termination signal.
    #[error("evaluation budget exhausted")]
    BudgetExhausted,

    /// A point of the wrong length was handed to an objective function.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The budget cannot accommodate even one full evaluation sweep.
    #[error("budget {budget} too small for population {population}")]
    BudgetTooSmall { budget: usize, population: usize },

    /// rand/1 mutation needs three distinct non-target vectors.
    #[error("population {population} too small: rand/1/bin needs at least {required}")]
    PopulationTooSmall { population: usize, required: usize },

    /// Requested benchmark function is not in the registry.
    #[error("unknown function {0:?}")]
    UnknownFunction(String),

    /// Requested optimizer is not one of the bundled three.
    #[error("unknown optimizer {0:?}, expected one of: hopso, pso, de")]
    UnknownOptimizer(String),

    /// Attempted to override the dimension of a function that does not
    /// support it.
    #[error("function {name:?} does not support dimension {dimension}")]
    FixedDimension { name: String, dimension: usize },

    /// `uniform_in` called with a reversed interval.
    #[error("invalid interval: lo {lo} > hi {hi}")]
    InvalidInterval { lo: f64, hi: f64 },

    /// The constriction factor is only defined for phi = c1 + c2 > 4.
    #[error("phi = {0} is not > 4: constriction factor undefined, supply chi explicitly")]
    InvalidPhi(f64),

    /// Attractor weights sum to zero.
    #[error("degenerate attractor weights: c1 + c2 = 0")]
    DegenerateWeights,

    /// Statistics over an empty sample are undefined.
    #[error("empty input")]
    EmptyInput,

    /// A results file failed to parse.
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },

    /// A results file is missing required columns.
    #[error("schema mismatch: missing columns {missing:?}")]
    SchemaMismatch { missing: Vec<String> },

    /// An experiment plan is malformed.
    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    /// Underlying I/O failure while reading or writing result files.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
