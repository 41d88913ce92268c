//! Behavioural checks of the two reference optimizers: update arithmetic
//! against hand-computed values, budget accounting, and elitist selection.

use oscilswarm::baselines::de::{self, MIN_POPULATION};
use oscilswarm::baselines::pso::{pso_position_update, pso_velocity_update};
use oscilswarm::baselines::{constriction_factor, DeConfig, PsoConfig};
use oscilswarm::core::{run_optimizer, BudgetMeter, ObjectiveSpec, RngStream};
use oscilswarm::testbed;
use oscilswarm::Error;
use std::sync::Arc;

#[test]
fn constriction_factor_reference_values() {
    // φ = 4.5 makes every intermediate value exactly representable:
    // χ = 2/|2 − 4.5 − √2.25| = 2/4.
    assert_eq!(constriction_factor(2.5, 2.0).unwrap(), 0.5);

    // The canonical φ = 4.1 setting; only the sum of the weights matters.
    let chi = constriction_factor(2.05, 2.05).unwrap();
    assert_eq!(chi, 0.7298437881283576);
    assert_eq!(constriction_factor(2.8, 1.3).unwrap(), chi);

    assert!(matches!(
        constriction_factor(2.0, 2.0),
        Err(Error::InvalidPhi(_))
    ));
    assert!(matches!(
        constriction_factor(1.0, 0.5),
        Err(Error::InvalidPhi(_))
    ));
}

#[test]
fn velocity_and_position_updates_are_exact_arithmetic() {
    // χ·(v + c₁r₁(p−x) + c₂r₂(g−x)) with hand-picked exact inputs:
    // 0.5·(1 + 2·0.5·2 + 1·1·(−1)) = 0.5·2 = 1.
    let v_next = pso_velocity_update(1.0, 0.0, 2.0, -1.0, 0.5, 2.0, 1.0, 0.5, 1.0);
    assert_eq!(v_next, 1.0);
    assert_eq!(pso_position_update(3.0, v_next), 4.0);

    // Zero randomness freezes the particle.
    assert_eq!(
        pso_velocity_update(0.0, 5.0, 1.0, 2.0, 0.7, 2.05, 2.05, 0.0, 0.0),
        0.0
    );
}

#[test]
fn pso_consumes_whole_sweeps_only() {
    let spec = testbed::spec_for("sphere", None).unwrap();
    let config = PsoConfig::default();
    let record = run_optimizer(&config, &spec, 1005, 0).unwrap();
    // 20 initial evaluations plus 49 sweeps of 20; the 5 leftover
    // evaluations cannot fit another synchronous sweep.
    assert_eq!(record.evaluations_used(), 1000);
    assert_eq!(record.trace.len(), 50);
}

#[test]
fn pso_contracts_onto_sphere_minimum() {
    let spec = testbed::spec_for("sphere", None).unwrap();
    let record = run_optimizer(&PsoConfig::default(), &spec, 1000, 7).unwrap();
    assert!(record.final_value < 1e-3, "got {}", record.final_value);
}

#[test]
fn de_explicit_population_budget_accounting() {
    let spec = testbed::spec_for("beale", None).unwrap();
    let config = DeConfig {
        population: Some(8),
        ..DeConfig::default()
    };
    let record = run_optimizer(&config, &spec, 1000, 1).unwrap();
    // 8 initial + 124 generations of 8 = 1000 evaluations, 125 trace points.
    assert_eq!(record.evaluations_used(), 1000);
    assert_eq!(record.trace.len(), 125);
}

#[test]
fn de_population_below_minimum_is_rejected() {
    let spec = testbed::spec_for("sphere", None).unwrap();
    let config = DeConfig {
        population: Some(MIN_POPULATION - 1),
        ..DeConfig::default()
    };
    let err = run_optimizer(&config, &spec, 1000, 0).unwrap_err();
    assert!(matches!(err, Error::PopulationTooSmall { .. }), "{err:?}");
}

#[test]
fn de_step_never_worsens_any_slot() {
    let spec = ObjectiveSpec::new(
        "quartic",
        vec![(-3.0, 3.0); 3],
        0.0,
        Arc::new(|x: &[f64]| x.iter().map(|v| v.powi(4)).sum()),
    )
    .unwrap();
    let population = 6;
    let mut rngs: Vec<RngStream> = (0..population)
        .map(|i| RngStream::substream(555, i as u64))
        .collect();
    let mut meter = BudgetMeter::new(10_000);
    let mut members: Vec<Vec<f64>> = (0..population)
        .map(|i| {
            (0..3)
                .map(|_| rngs[i].uniform_in(-3.0, 3.0).unwrap())
                .collect()
        })
        .collect();
    let mut values: Vec<f64> = members.iter().map(|m| spec.evaluate(m)).collect();

    for generation in 0..60 {
        let before = values.clone();
        de::de_step(
            &spec,
            &mut meter,
            &mut members,
            &mut values,
            0.8,
            0.7,
            &mut rngs,
        )
        .unwrap();
        for (slot, (old, new)) in before.iter().zip(&values).enumerate() {
            assert!(
                new <= old,
                "generation {generation} slot {slot} regressed {old} -> {new}"
            );
        }
    }
    assert!(values.iter().cloned().fold(f64::INFINITY, f64::min) < 1e-2);
}

#[test]
fn de_refines_sphere_with_default_settings() {
    let spec = testbed::spec_for("sphere", None).unwrap();
    let record = run_optimizer(&DeConfig::default(), &spec, 1000, 42).unwrap();
    assert!(record.final_value < 1e-2, "got {}", record.final_value);
}

#[test]
fn baseline_configs_roundtrip_through_json() {
    let pso: PsoConfig = serde_json::from_str("{}").unwrap();
    assert_eq!(pso, PsoConfig::default());
    let pso: PsoConfig = serde_json::from_str(r#"{"chi": 0.6, "particles": 40}"#).unwrap();
    assert_eq!(pso.chi, 0.6);
    assert_eq!(pso.particles, 40);
    assert_eq!(pso.c1, 2.05);

    let config: DeConfig =
        serde_json::from_str(r#"{"population": 12, "mutation": 0.9, "crossover": 0.5}"#).unwrap();
    assert_eq!(config.population, Some(12));
    assert_eq!(config.crossover, 0.5);
    assert!(serde_json::from_str::<PsoConfig>(r#"{"particle": 9}"#).is_err());
}
