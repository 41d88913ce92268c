//! Constricted-factor particle swarm optimization.
//!
//! The update per particle `j` and dimension `k` is
//!
//! ```text
//! v ← χ·(v + c₁r₁·(p − x) + c₂r₂·(g − x))
//! x ← x + v
//! ```
//!
//! with `r₁, r₂` drawn fresh per particle per sweep and shared across that
//! particle's dimensions, no velocity clamping and no position clamping.
//! Sweeps are synchronous: all particles move and are evaluated, then
//! personal bests update, then the global best updates once.

use serde::{Deserialize, Serialize};

use crate::core::{checked_evaluate, BudgetMeter, ObjectiveSpec, Optimizer, RngStream, RunRecord};
use crate::error::{Error, Result};

/// Tunables of the constricted swarm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoConfig {
    /// Constriction factor χ.
    pub chi: f64,
    /// Cognitive acceleration weight.
    pub c1: f64,
    /// Social acceleration weight.
    pub c2: f64,
    /// Swarm size `N`.
    pub particles: usize,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            chi: 0.7298,
            c1: 2.05,
            c2: 2.05,
            particles: 20,
        }
    }
}

/// The constriction factor `χ = 2/|2 − φ − √(φ² − 4φ)|` with `φ = c₁ + c₂`,
/// defined for `φ > 4`.
pub fn constriction_factor(c1: f64, c2: f64) -> Result<f64> {
    let phi = c1 + c2;
    if !(phi > 4.0) {
        return Err(Error::InvalidPhi(phi));
    }
    Ok(2.0 / (2.0 - phi - (phi * phi - 4.0 * phi).sqrt()).abs())
}

/// One velocity update: `χ·(v + c₁r₁(p−x) + c₂r₂(g−x))`.
// One scalar per symbol of the update equation, by design.
#[allow(clippy::too_many_arguments)]
pub fn pso_velocity_update(
    v: f64,
    x: f64,
    p: f64,
    g: f64,
    chi: f64,
    c1: f64,
    c2: f64,
    r1: f64,
    r2: f64,
) -> f64 {
    chi * (v + c1 * r1 * (p - x) + c2 * r2 * (g - x))
}

/// One position update: `x + v_next`.
pub fn pso_position_update(x: f64, v_next: f64) -> f64 {
    x + v_next
}

impl Optimizer for PsoConfig {
    fn name(&self) -> &str {
        "pso"
    }

    fn population(&self, _dimension: usize, _budget: usize) -> usize {
        self.particles
    }

    fn run(&self, spec: &ObjectiveSpec, budget: usize, seed: u64) -> Result<RunRecord> {
        if self.particles == 0 {
            return Err(Error::InvalidPlan(
                "pso requires at least one particle".into(),
            ));
        }
        let n = self.particles;
        let d = spec.dimension();
        if budget < n {
            return Err(Error::BudgetTooSmall {
                budget,
                population: n,
            });
        }
        let mut meter = BudgetMeter::new(budget);

        // Initialization sweep: random positions, zero velocities.
        let mut rngs = Vec::with_capacity(n);
        let mut x = Vec::with_capacity(n);
        let mut fp = Vec::with_capacity(n);
        for j in 0..n {
            let mut rng = RngStream::substream(seed, j as u64);
            let xj: Vec<f64> = spec
                .init_box()
                .iter()
                .map(|&(lo, hi)| rng.uniform_in(lo, hi))
                .collect::<Result<_>>()?;
            fp.push(checked_evaluate(spec, &xj, &mut meter)?);
            x.push(xj);
            rngs.push(rng);
        }
        let mut v = vec![vec![0.0; d]; n];
        let mut p = x.clone();
        let best = argmin(&fp);
        let mut g = p[best].clone();
        let mut fg = fp[best];

        let mut trace = vec![(meter.used(), fg)];
        let mut fx = vec![0.0; n];
        while meter.remaining() >= n {
            for j in 0..n {
                let r1 = rngs[j].unit();
                let r2 = rngs[j].unit();
                for k in 0..d {
                    v[j][k] = pso_velocity_update(
                        v[j][k], x[j][k], p[j][k], g[k], self.chi, self.c1, self.c2, r1, r2,
                    );
                    x[j][k] = pso_position_update(x[j][k], v[j][k]);
                }
                fx[j] = checked_evaluate(spec, &x[j], &mut meter)?;
            }
            for j in 0..n {
                if fx[j] < fp[j] {
                    fp[j] = fx[j];
                    p[j].copy_from_slice(&x[j]);
                }
            }
            let best = argmin(&fp);
            if fp[best] < fg {
                fg = fp[best];
                g.copy_from_slice(&p[best]);
            }
            trace.push((meter.used(), fg));
        }

        Ok(RunRecord {
            optimizer: "pso".into(),
            objective: spec.name().into(),
            dimension: d,
            budget,
            seed,
            config: serde_json::to_string(self).expect("config serializes"),
            trace,
            final_position: g,
            final_value: fg,
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
