//! Reference optimizers the oscillator swarm is benchmarked against:
//! constricted-factor PSO and differential evolution (rand/1/bin).

pub mod de;
pub mod pso;

pub use de::{DeConfig, MutationFactor};
pub use pso::{constriction_factor, PsoConfig};
