//! Differential evolution, rand/1/bin variant.
//!
//! Each generation builds one trial per member: a mutant
//! `x_{r1} + F·(x_{r2} − x_{r3})` from three distinct non-target members is
//! recombined with the target by binomial crossover (one coordinate is always
//! taken from the mutant), and the trial replaces the target only when it is
//! strictly better. Selection is deferred: every trial of a generation is
//! built and evaluated against the population as it stood at the start of the
//! generation, then all replacements happen at once. A generation whose
//! evaluations would not fit the remaining budget is skipped entirely.

use serde::{Deserialize, Serialize};

use crate::core::{checked_evaluate, BudgetMeter, ObjectiveSpec, Optimizer, RngStream, RunRecord};
use crate::error::{Error, Result};

/// Smallest population rand/1 mutation supports: the target plus three
/// pairwise-distinct other members.
pub const MIN_POPULATION: usize = 4;

/// Mutation weight applied to the difference vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MutationFactor {
    /// The same weight every generation.
    Fixed(f64),
    /// A fresh weight per generation, uniform in `[lo, hi)`.
    Dither { lo: f64, hi: f64 },
}

/// Tunables of the differential-evolution baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeConfig {
    /// Population size; `None` picks `15·d`, capped so at least about a
    /// hundred generations fit the budget and floored at [`MIN_POPULATION`].
    pub population: Option<usize>,
    /// Mutation factor `F`.
    pub mutation: MutationFactor,
    /// Crossover rate `CR` in `[0, 1]`.
    pub crossover: f64,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self {
            population: None,
            mutation: MutationFactor::Dither { lo: 0.5, hi: 1.0 },
            crossover: 0.7,
        }
    }
}

impl DeConfig {
    /// Checks the configuration is usable for any problem.
    pub fn validate(&self) -> Result<()> {
        if let Some(population) = self.population {
            if population < MIN_POPULATION {
                return Err(Error::PopulationTooSmall {
                    population,
                    required: MIN_POPULATION,
                });
            }
        }
        if let MutationFactor::Dither { lo, hi } = self.mutation {
            if !(lo <= hi) {
                return Err(Error::InvalidInterval { lo, hi });
            }
        }
        if !(0.0..=1.0).contains(&self.crossover) {
            return Err(Error::InvalidPlan(format!(
                "crossover rate must lie in [0, 1], got {}",
                self.crossover
            )));
        }
        Ok(())
    }
}

/// Default population rule: `15·d`, capped at `budget/100` so the run gets a
/// meaningful number of generations, floored at [`MIN_POPULATION`].
pub fn default_population(dimension: usize, budget: usize) -> usize {
    (15 * dimension).min(budget / 100).max(MIN_POPULATION)
}

/// The rand/1 mutant `x_{r1} + f·(x_{r2} − x_{r3})`.
pub fn de_mutant(xr1: &[f64], xr2: &[f64], xr3: &[f64], f: f64) -> Vec<f64> {
    xr1.iter()
        .zip(xr2.iter().zip(xr3))
        .map(|(&a, (&b, &c))| a + f * (b - c))
        .collect()
}

/// Binomial crossover: each coordinate comes from the mutant with probability
/// `cr`, and one uniformly chosen coordinate comes from the mutant
/// unconditionally so the trial never equals the target verbatim.
pub fn de_trial(target: &[f64], mutant: &[f64], cr: f64, rng: &mut RngStream) -> Vec<f64> {
    let d = target.len();
    let forced = rng.index(d);
    (0..d)
        .map(|k| {
            let from_mutant = rng.unit() < cr;
            if from_mutant || k == forced {
                mutant[k]
            } else {
                target[k]
            }
        })
        .collect()
}

/// Advances the population by one synchronous generation: trials are built
/// and evaluated against the incoming population, then each slot keeps the
/// strictly better of target and trial.
///
/// `rngs[i]` drives member `i`'s index and crossover draws; `f` is this
/// generation's mutation factor.
pub fn de_step(
    spec: &ObjectiveSpec,
    meter: &mut BudgetMeter,
    members: &mut [Vec<f64>],
    values: &mut [f64],
    f: f64,
    cr: f64,
    rngs: &mut [RngStream],
) -> Result<()> {
    let population = members.len();
    if population < MIN_POPULATION {
        return Err(Error::PopulationTooSmall {
            population,
            required: MIN_POPULATION,
        });
    }
    if meter.remaining() < population {
        return Err(Error::BudgetExhausted);
    }

    let mut trials = Vec::with_capacity(population);
    for i in 0..population {
        let rng = &mut rngs[i];
        let mut picks = [i; 3];
        for p in 0..3 {
            loop {
                let candidate = rng.index(population);
                if candidate != i && !picks[..p].contains(&candidate) {
                    picks[p] = candidate;
                    break;
                }
            }
        }
        let [r1, r2, r3] = picks;
        let mutant = de_mutant(&members[r1], &members[r2], &members[r3], f);
        trials.push(de_trial(&members[i], &mutant, cr, rng));
    }

    for (i, trial) in trials.into_iter().enumerate() {
        let value = checked_evaluate(spec, &trial, meter)?;
        if value < values[i] {
            members[i] = trial;
            values[i] = value;
        }
    }
    Ok(())
}

impl Optimizer for DeConfig {
    fn name(&self) -> &str {
        "de"
    }

    fn population(&self, dimension: usize, budget: usize) -> usize {
        self.population
            .unwrap_or_else(|| default_population(dimension, budget))
    }

    fn run(&self, spec: &ObjectiveSpec, budget: usize, seed: u64) -> Result<RunRecord> {
        self.validate()?;
        let population = self.population(spec.dimension(), budget);
        if budget < population {
            return Err(Error::BudgetTooSmall { budget, population });
        }
        let mut meter = BudgetMeter::new(budget);

        // Member i draws from substream i; the generation-level stream sits
        // one past the last member and supplies the dither draws.
        let mut rngs = Vec::with_capacity(population);
        let mut members = Vec::with_capacity(population);
        let mut values = Vec::with_capacity(population);
        for i in 0..population {
            let mut rng = RngStream::substream(seed, i as u64);
            let x: Vec<f64> = spec
                .init_box()
                .iter()
                .map(|&(lo, hi)| rng.uniform_in(lo, hi))
                .collect::<Result<_>>()?;
            values.push(checked_evaluate(spec, &x, &mut meter)?);
            members.push(x);
            rngs.push(rng);
        }
        let mut gen_rng = RngStream::substream(seed, population as u64);

        let mut best = argmin(&values);
        let mut trace = vec![(meter.used(), values[best])];
        while meter.remaining() >= population {
            let f = match self.mutation {
                MutationFactor::Fixed(f) => f,
                MutationFactor::Dither { lo, hi } => gen_rng.uniform_in(lo, hi)?,
            };
            de_step(
                spec,
                &mut meter,
                &mut members,
                &mut values,
                f,
                self.crossover,
                &mut rngs,
            )?;
            best = argmin(&values);
            trace.push((meter.used(), values[best]));
        }

        Ok(RunRecord {
            optimizer: "de".into(),
            objective: spec.name().into(),
            dimension: spec.dimension(),
            budget,
            seed,
            config: serde_json::to_string(self).expect("config serializes"),
            trace,
            final_position: members[best].clone(),
            final_value: values[best],
        })
    }
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = i;
        }
    }
    best
}
