//! The twelve-function benchmark suite.
//!
//! Each function is registered with its conventional initialization box,
//! default dimension, and known minimum value. Four functions (`beale`,
//! `cross-in-tray`, `drop-wave`, `goldstein-price`) are defined only in two
//! dimensions; the rest accept a dimension override through [`spec_for`].
//!
//! Fixed constants that the literature leaves implicit are pinned here:
//! Ackley uses `a = 20, b = 0.2, c = 2π`; Levy uses `w_i = 1 + (x_i − 1)/4`;
//! Michalewicz uses steepness `m = 10`; Beale squares all three residual
//! terms; Schwefel carries the `418.9829·d` offset so its minimum value is 0.

use std::f64::consts::{E, PI};
use std::sync::Arc;

use crate::core::ObjectiveSpec;
use crate::error::{Error, Result};

/// Registry metadata for one benchmark function.
#[derive(Debug, Clone, Copy)]
pub struct FunctionInfo {
    pub name: &'static str,
    pub default_dimension: usize,
    /// `true` for functions defined only at their default dimension.
    pub fixed_dimension: bool,
    pub init_lo: f64,
    pub init_hi: f64,
    pub f_min: f64,
}

const REGISTRY: [FunctionInfo; 12] = [
    FunctionInfo {
        name: "ackley",
        default_dimension: 10,
        fixed_dimension: false,
        init_lo: -32.76,
        init_hi: 32.76,
        f_min: 0.0,
    },
    FunctionInfo {
        name: "beale",
        default_dimension: 2,
        fixed_dimension: true,
        init_lo: -5.0,
        init_hi: 5.0,
        f_min: 0.0,
    },
    FunctionInfo {
        name: "cross-in-tray",
        default_dimension: 2,
        fixed_dimension: true,
        init_lo: -10.0,
        init_hi: 10.0,
        f_min: -2.06261,
    },
    FunctionInfo {
        name: "drop-wave",
        default_dimension: 2,
        fixed_dimension: true,
        init_lo: -5.12,
        init_hi: 5.12,
        f_min: -1.0,
    },
    FunctionInfo {
        name: "goldstein-price",
        default_dimension: 2,
        fixed_dimension: true,
        init_lo: -2.0,
        init_hi: 2.0,
        f_min: 3.0,
    },
    FunctionInfo {
        name: "griewank",
        default_dimension: 10,
        fixed_dimension: false,
        init_lo: -600.0,
        init_hi: 600.0,
        f_min: 0.0,
    },
    FunctionInfo {
        name: "levy",
        default_dimension: 10,
        fixed_dimension: false,
        init_lo: -10.0,
        init_hi: 10.0,
        f_min: 0.0,
    },
    FunctionInfo {
        name: "michalewicz",
        default_dimension: 5,
        fixed_dimension: false,
        init_lo: 0.0,
        init_hi: PI,
        f_min: -4.687,
    },
    FunctionInfo {
        name: "rastrigin",
        default_dimension: 10,
        fixed_dimension: false,
        init_lo: -5.12,
        init_hi: 5.12,
        f_min: 0.0,
    },
    FunctionInfo {
        name: "rosenbrock",
        default_dimension: 10,
        fixed_dimension: false,
        init_lo: -5.0,
        init_hi: 10.0,
        f_min: 0.0,
    },
    FunctionInfo {
        name: "schwefel",
        default_dimension: 10,
        fixed_dimension: false,
        init_lo: -500.0,
        init_hi: 500.0,
        f_min: 0.0,
    },
    FunctionInfo {
        name: "sphere",
        default_dimension: 5,
        fixed_dimension: false,
        init_lo: -10.0,
        init_hi: 10.0,
        f_min: 0.0,
    },
];

/// Michalewicz minima depend on dimension; values are known for these.
const MICHALEWICZ_MINIMA: [(usize, f64); 3] = [(2, -1.8013), (5, -4.687), (10, -9.66015)];

/// Per-dimension Michalewicz minimizer coordinates (the function is
/// separable, so coordinates extend across dimensions). Obtained by a dense
/// grid scan refined with golden-section search.
const MICHALEWICZ_ARGMIN: [f64; 5] = [
    2.202_905_518_586_594_4,
    1.570_796_326_810_788_7,
    1.284_991_568_520_736,
    1.923_058_469_162_624,
    1.720_469_772_553_253_8,
];

/// Cross-in-tray minimizer in the (+,+) quadrant, grid + golden-section
/// refined; the function has three symmetric copies.
const CROSS_IN_TRAY_ARGMIN: f64 = 1.349_406_540_815_378_2;

/// Schwefel's per-dimension minimizer.
const SCHWEFEL_ARGMIN: f64 = 420.9687;

/// Ordered list of registered function names.
pub fn function_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|info| info.name).collect()
}

/// Registry metadata in listing order.
pub fn function_infos() -> Vec<FunctionInfo> {
    REGISTRY.to_vec()
}

fn lookup(name: &str) -> Result<&'static FunctionInfo> {
    REGISTRY
        .iter()
        .find(|info| info.name == name)
        .ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

/// Evaluates a registered function at its default dimension.
pub fn evaluate(name: &str, x: &[f64]) -> Result<f64> {
    let info = lookup(name)?;
    if x.len() != info.default_dimension {
        return Err(Error::DimensionMismatch {
            expected: info.default_dimension,
            got: x.len(),
        });
    }
    Ok(apply(name, x))
}

/// Builds the [`ObjectiveSpec`] for `name`, optionally overriding the
/// dimension where the function is dimension-parametric.
pub fn spec_for(name: &str, dimension: Option<usize>) -> Result<ObjectiveSpec> {
    let info = lookup(name)?;
    let d = match dimension {
        Some(d) if d != info.default_dimension => {
            if info.fixed_dimension || d == 0 {
                return Err(Error::FixedDimension {
                    name: name.to_string(),
                    dimension: d,
                });
            }
            d
        }
        _ => info.default_dimension,
    };
    let f_min = if name == "michalewicz" && d != info.default_dimension {
        // Only dimensions with literature-known minima are allowed.
        MICHALEWICZ_MINIMA
            .iter()
            .find(|&&(dim, _)| dim == d)
            .map(|&(_, v)| v)
            .ok_or(Error::FixedDimension {
                name: name.to_string(),
                dimension: d,
            })?
    } else {
        info.f_min
    };

    let owned = name.to_string();
    let eval: crate::core::Objective = Arc::new(move |x: &[f64]| apply(&owned, x));
    let spec = ObjectiveSpec::new(name, vec![(info.init_lo, info.init_hi); d], f_min, eval)?;
    Ok(match known_minimizer(name, d) {
        Some(xstar) => spec.with_known_minimizer(xstar),
        None => spec,
    })
}

fn known_minimizer(name: &str, d: usize) -> Option<Vec<f64>> {
    match name {
        "ackley" | "griewank" | "rastrigin" | "sphere" => Some(vec![0.0; d]),
        "beale" => Some(vec![3.0, 0.5]),
        "cross-in-tray" => Some(vec![CROSS_IN_TRAY_ARGMIN, CROSS_IN_TRAY_ARGMIN]),
        "drop-wave" => Some(vec![0.0, 0.0]),
        "goldstein-price" => Some(vec![0.0, -1.0]),
        "levy" | "rosenbrock" => Some(vec![1.0; d]),
        "michalewicz" => (d <= MICHALEWICZ_ARGMIN.len()).then(|| MICHALEWICZ_ARGMIN[..d].to_vec()),
        "schwefel" => Some(vec![SCHWEFEL_ARGMIN; d]),
        _ => None,
    }
}

fn apply(name: &str, x: &[f64]) -> f64 {
    match name {
        "ackley" => ackley(x),
        "beale" => beale(x),
        "cross-in-tray" => cross_in_tray(x),
        "drop-wave" => drop_wave(x),
        "goldstein-price" => goldstein_price(x),
        "griewank" => griewank(x),
        "levy" => levy(x),
        "michalewicz" => michalewicz(x),
        "rastrigin" => rastrigin(x),
        "rosenbrock" => rosenbrock(x),
        "schwefel" => schwefel(x),
        "sphere" => sphere(x),
        _ => unreachable!("apply called with unregistered name"),
    }
}

pub fn ackley(x: &[f64]) -> f64 {
    let (a, b, c) = (20.0, 0.2, 2.0 * PI);
    let d = x.len() as f64;
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();
    let sum_cos: f64 = x.iter().map(|v| (c * v).cos()).sum();
    -a * (-b * (sum_sq / d).sqrt()).exp() - (sum_cos / d).exp() + a + E
}

pub fn beale(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let t1 = 1.5 - a + a * b;
    let t2 = 2.25 - a + a * b * b;
    let t3 = 2.625 - a + a * b * b * b;
    t1 * t1 + t2 * t2 + t3 * t3
}

pub fn cross_in_tray(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let inner = a.sin() * b.sin() * (100.0 - (a * a + b * b).sqrt() / PI).abs().exp();
    -1e-4 * (inner.abs() + 1.0).powf(0.1)
}

pub fn drop_wave(x: &[f64]) -> f64 {
    let r2 = x[0] * x[0] + x[1] * x[1];
    -(1.0 + (12.0 * r2.sqrt()).cos()) / (0.5 * r2 + 2.0)
}

pub fn goldstein_price(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let t1 = 1.0
        + (a + b + 1.0).powi(2)
            * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
    let t2 = 30.0
        + (2.0 * a - 3.0 * b).powi(2)
            * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
    t1 * t2
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    sum - prod + 1.0
}

pub fn levy(x: &[f64]) -> f64 {
    let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
    let d = w.len();
    let head = (PI * w[0]).sin().powi(2);
    let middle: f64 = w[..d - 1]
        .iter()
        .map(|&wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
        .sum();
    let tail = (w[d - 1] - 1.0).powi(2) * (1.0 + (2.0 * PI * w[d - 1]).sin().powi(2));
    head + middle + tail
}

pub fn michalewicz(x: &[f64]) -> f64 {
    let m = 10;
    -x.iter()
        .enumerate()
        .map(|(i, &xi)| xi.sin() * ((i + 1) as f64 * xi * xi / PI).sin().powi(2 * m))
        .sum::<f64>()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum::<f64>()
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

pub fn schwefel(x: &[f64]) -> f64 {
    418.9829 * x.len() as f64 + x.iter().map(|v| -v * v.abs().sqrt().sin()).sum::<f64>()
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_exactly_the_twelve() {
        assert_eq!(
            function_names(),
            vec![
                "ackley",
                "beale",
                "cross-in-tray",
                "drop-wave",
                "goldstein-price",
                "griewank",
                "levy",
                "michalewicz",
                "rastrigin",
                "rosenbrock",
                "schwefel",
                "sphere",
            ]
        );
    }

    #[test]
    fn unknown_function_is_an_error() {
        assert!(matches!(
            spec_for("nosuch", None),
            Err(Error::UnknownFunction(_))
        ));
        assert!(matches!(
            evaluate("nosuch", &[0.0]),
            Err(Error::UnknownFunction(_))
        ));
    }

    #[test]
    fn fixed_dimension_functions_reject_overrides() {
        for name in ["beale", "cross-in-tray", "drop-wave", "goldstein-price"] {
            assert!(matches!(
                spec_for(name, Some(7)),
                Err(Error::FixedDimension { .. })
            ));
        }
        // Explicitly passing the default dimension is fine.
        assert_eq!(spec_for("beale", Some(2)).unwrap().dimension(), 2);
    }

    #[test]
    fn parametric_dimension_override() {
        let spec = spec_for("sphere", Some(12)).unwrap();
        assert_eq!(spec.dimension(), 12);
        assert_eq!(spec.init_box()[0], (-10.0, 10.0));
        let spec = spec_for("michalewicz", Some(2)).unwrap();
        assert_eq!(spec.f_min(), -1.8013);
        assert!(matches!(
            spec_for("michalewicz", Some(7)),
            Err(Error::FixedDimension { .. })
        ));
    }
}
