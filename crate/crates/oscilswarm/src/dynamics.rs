//! Stability analysis of a single PSO dimension.
//!
//! Between two best-position updates, one coordinate of a constricted swarm
//! evolves linearly: with the shifted position `y = attractor − x` and state
//! `P = (v, y)`, one iteration multiplies `P` by
//!
//! ```text
//! M = [ χ    χφ  ]        φ = c₁r₁ + c₂r₂
//!     [ −χ   1−χφ ]
//! ```
//!
//! This module provides the matrix, closed-form eigenvalues and singular
//! values, a convergence predicate, random matrix-product trajectories, and
//! the singular-value sweep over `r = r₁ + r₂ ∈ [0, 2]`.

use std::io::Write;

use num_complex::Complex64;

use crate::error::Result;

/// Default grid resolution for [`singular_value_sweep`].
pub const SWEEP_DEFAULT_SAMPLES: usize = 200;

/// State of one swarm dimension: velocity and shifted position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub v: f64,
    pub y: f64,
}

impl TrajectoryState {
    /// Euclidean norm of `(v, y)`.
    pub fn norm(&self) -> f64 {
        self.v.hypot(self.y)
    }
}

/// The 2×2 matrix advancing `(v, y)` by one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicalMatrix {
    pub chi: f64,
    pub phi: f64,
    pub entries: [[f64; 2]; 2],
}

impl DynamicalMatrix {
    /// Determinant; equals `χ` by construction.
    pub fn det(&self) -> f64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    /// Applies the matrix to a state.
    pub fn apply(&self, p: TrajectoryState) -> TrajectoryState {
        TrajectoryState {
            v: self.entries[0][0] * p.v + self.entries[0][1] * p.y,
            y: self.entries[1][0] * p.v + self.entries[1][1] * p.y,
        }
    }
}

/// Builds the dynamical matrix for one draw of the random coefficients.
pub fn build_matrix(chi: f64, c1: f64, c2: f64, r1: f64, r2: f64) -> DynamicalMatrix {
    let phi = c1 * r1 + c2 * r2;
    DynamicalMatrix {
        chi,
        phi,
        entries: [[chi, chi * phi], [-chi, 1.0 - chi * phi]],
    }
}

/// Closed-form eigenvalues `½(1 + (1−φ)χ ± √(((φ−1)χ − 1)² − 4χ))`.
///
/// The pair is returned `(+ branch, − branch)`; a negative discriminant
/// yields a conjugate pair, both of modulus `√χ`.
pub fn eigenvalues_closed_form(chi: f64, phi: f64) -> (Complex64, Complex64) {
    let half_trace = 0.5 * (1.0 + (1.0 - phi) * chi);
    let discriminant = ((phi - 1.0) * chi - 1.0).powi(2) - 4.0 * chi;
    let root = if discriminant >= 0.0 {
        Complex64::new(discriminant.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-discriminant).sqrt())
    };
    (half_trace + 0.5 * root, half_trace - 0.5 * root)
}

/// Singular values of the iteration matrix for `c₁ = c₂ = c` and
/// `r = r₁ + r₂`, computed from the entries of `MᵀM`: with trace `T` and
/// `det(MᵀM) = χ²`, the squared singular values are `(T ± √(T² − 4χ²))/2`.
///
/// Returned as `σ₁ ≥ σ₂ ≥ 0`.
pub fn singular_values_closed_form(chi: f64, c: f64, r: f64) -> (f64, f64) {
    let m = build_matrix(chi, c, c, 0.5 * r, 0.5 * r);
    let [[a, b], [c_, d]] = m.entries;
    let trace_gram = a * a + b * b + c_ * c_ + d * d;
    let det = m.det();
    split_singular_values(trace_gram, det)
}

/// The same singular values from the explicit scalar formula in `φ = c·r`,
/// kept as an independent cross-check of [`singular_values_closed_form`]:
/// `T = 2χ²(1 + φ²) − 2χφ + 1`.
pub fn singular_values_simplified(chi: f64, c: f64, r: f64) -> (f64, f64) {
    let phi = c * r;
    let trace_gram = 2.0 * chi * chi * (1.0 + phi * phi) - 2.0 * chi * phi + 1.0;
    split_singular_values(trace_gram, chi)
}

fn split_singular_values(trace_gram: f64, det: f64) -> (f64, f64) {
    let gap = (trace_gram * trace_gram - 4.0 * det * det).max(0.0).sqrt();
    let s1 = (0.5 * (trace_gram + gap)).max(0.0).sqrt();
    let s2 = (0.5 * (trace_gram - gap)).max(0.0).sqrt();
    (s1, s2)
}

/// True iff both eigenvalue moduli are strictly below one.
pub fn convergence_check(chi: f64, phi: f64) -> bool {
    let (l1, l2) = eigenvalues_closed_form(chi, phi);
    l1.norm().max(l2.norm()) < 1.0
}

/// Multiplies `steps` freshly-drawn random matrices onto `P₀ = (1, 1)` and
/// records the state norm, starting with the initial state, so the result
/// has `steps + 1` entries.
///
/// `r₁, r₂` are drawn uniformly from `[0, 1)` per step.
///
/// # Panics
/// If `steps` is zero.
pub fn random_product_trajectory(chi: f64, c1: f64, c2: f64, steps: usize, seed: u64) -> Vec<f64> {
    assert!(steps >= 1, "a trajectory needs at least one step");
    let mut rng = crate::core::RngStream::from_seed(seed);
    let mut p = TrajectoryState { v: 1.0, y: 1.0 };
    let mut norms = Vec::with_capacity(steps + 1);
    norms.push(p.norm());
    for _ in 0..steps {
        let r1 = rng.unit();
        let r2 = rng.unit();
        p = build_matrix(chi, c1, c2, r1, r2).apply(p);
        norms.push(p.norm());
    }
    norms
}

/// Singular values on a uniform inclusive grid of `samples` points over
/// `r ∈ [0, 2]`, ordered by `r`.
///
/// # Panics
/// If `samples < 2`.
pub fn singular_value_sweep(chi: f64, c: f64, samples: usize) -> Vec<(f64, f64, f64)> {
    assert!(samples >= 2, "the sweep needs both endpoints");
    (0..samples)
        .map(|i| {
            let r = 2.0 * i as f64 / (samples - 1) as f64;
            let (s1, s2) = singular_values_closed_form(chi, c, r);
            (r, s1, s2)
        })
        .collect()
}

/// Writes sweep rows as CSV with header `r,sigma1,sigma2`.
pub fn write_sweep_csv<W: Write>(out: &mut W, rows: &[(f64, f64, f64)]) -> Result<()> {
    writeln!(out, "r,sigma1,sigma2")?;
    for &(r, s1, s2) in rows {
        writeln!(out, "{r},{s1},{s2}")?;
    }
    Ok(())
}

/// Writes a norm sequence as CSV with header `step,norm`.
pub fn write_trajectory_csv<W: Write>(out: &mut W, norms: &[f64]) -> Result<()> {
    writeln!(out, "step,norm")?;
    for (step, norm) in norms.iter().enumerate() {
        writeln!(out, "{step},{norm}")?;
    }
    Ok(())
}
