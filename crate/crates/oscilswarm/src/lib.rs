//! Global-optimization toolkit built around a harmonic-oscillator particle swarm.
//!
//! The crate provides three derivative-free optimizers sharing one budgeted,
//! seeded execution contract:
//!
//! * [`hopso`] — a swarm whose particles follow analytically solved damped
//!   harmonic oscillations about an attractor blending personal- and
//!   global-best positions, sampled at random times.
//! * [`baselines::pso`] — the classic constricted-factor particle swarm.
//! * [`baselines::de`] — differential evolution, rand/1/bin.
//!
//! Around them sit a twelve-function benchmark [`testbed`], a [`dynamics`]
//! module analysing the stability of the constricted-PSO update map, and a
//! [`harness`] that executes repeated seeded runs, aggregates box-plot
//! statistics, and emits results as CSV/JSON/Markdown tables.
//!
//! Every run is a pure function of `(config, objective, budget, seed)`:
//! repeated executions produce byte-identical records, and the harness yields
//! the same output whether rows run serially or on a thread pool (enable the
//! default `parallel` feature for the latter).
//!
//! ```
//! use oscilswarm::core::run_optimizer;
//! use oscilswarm::hopso::HopsoConfig;
//! use oscilswarm::testbed;
//!
//! let spec = testbed::spec_for("sphere", None).unwrap();
//! let record = run_optimizer(&HopsoConfig::default(), &spec, 1000, 42).unwrap();
//! assert!(record.final_value < 1e-3);
//! ```

// Numeric validation deliberately spells checks as `!(x > 0.0)` rather than
// `x <= 0.0`: the negated form fails closed on NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod core;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod hopso;
pub mod testbed;

pub use error::{Error, Result};
