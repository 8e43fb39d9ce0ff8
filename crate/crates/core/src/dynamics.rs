//! Orbit engines: fixed-count iteration (feeds the equipotential models),
//! escape time, and the successive-distance approximation criterion.

use thiserror::Error;

use crate::funcexpr::MapExpr;
use crate::numerics::{is_finite, Complex};

/// Default iteration cap of the classical methods.
pub const DEFAULT_MAX_ITERS: u32 = 50;
/// Default radius of the trapping disc.
pub const DEFAULT_ESCAPE_RADIUS: f64 = 2.0;
/// Default successive-distance threshold.
pub const DEFAULT_EPSILON: f64 = 0.00001;
/// Largest supported iteration count.
pub const MAX_SUPPORTED_ITERS: u32 = i32::MAX as u32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BudgetError {
    #[error("max_iters must be >= 1")]
    ZeroIterations,
    #[error("max_iters must be <= {MAX_SUPPORTED_ITERS}, got {0}")]
    TooManyIterations(u32),
    #[error("escape_radius must be a positive finite number, got {0}")]
    EscapeRadius(f64),
    #[error("epsilon must lie in (0, 1), got {0}")]
    Epsilon(f64),
}

impl BudgetError {
    /// Name of the offending field.
    pub fn field(&self) -> &'static str {
        match self {
            BudgetError::ZeroIterations | BudgetError::TooManyIterations(_) => "iters",
            BudgetError::EscapeRadius(_) => "escape_radius",
            BudgetError::Epsilon(_) => "epsilon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationBudget {
    max_iters: u32,
    escape_radius: f64,
    epsilon: f64,
}

impl IterationBudget {
    pub fn new(max_iters: u32, escape_radius: f64, epsilon: f64) -> Result<Self, BudgetError> {
        if max_iters == 0 {
            return Err(BudgetError::ZeroIterations);
        }
        if max_iters > MAX_SUPPORTED_ITERS {
            return Err(BudgetError::TooManyIterations(max_iters));
        }
        if !(escape_radius > 0.0 && escape_radius.is_finite()) {
            return Err(BudgetError::EscapeRadius(escape_radius));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(BudgetError::Epsilon(epsilon));
        }
        Ok(Self {
            max_iters,
            escape_radius,
            epsilon,
        })
    }

    pub fn max_iters(&self) -> u32 {
        self.max_iters
    }

    pub fn escape_radius(&self) -> f64 {
        self.escape_radius
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for IterationBudget {
    fn default() -> Self {
        Self {
            max_iters: DEFAULT_MAX_ITERS,
            escape_radius: DEFAULT_ESCAPE_RADIUS,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    BudgetExhausted,
    Escaped,
    Approximated,
    /// A step produced a non-finite value (pole or overflow).
    Poisoned,
}

/// Where an orbit stopped and why.
///
/// `steps_taken` counts applications of `f`, including the one that
/// triggered termination. For `Escaped` and `Approximated`, `final_z` is
/// the image that met the test. For `Poisoned`, `final_z` is the last
/// finite iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitOutcome {
    pub final_z: Complex,
    pub steps_taken: u32,
    pub termination: Termination,
}

/// `f_n(seed)` with no test conditions; `f_0(seed) = seed`.
pub fn iterate_fixed(f: &MapExpr, seed: Complex, n: u32) -> OrbitOutcome {
    let mut z = seed;
    for step in 1..=n {
        let next = f.eval(z);
        if !is_finite(next) {
            return OrbitOutcome {
                final_z: z,
                steps_taken: step,
                termination: Termination::Poisoned,
            };
        }
        z = next;
    }
    OrbitOutcome {
        final_z: z,
        steps_taken: n,
        termination: Termination::BudgetExhausted,
    }
}

/// Escape-time iteration: stop once `|f(z)| > escape_radius`.
pub fn iterate_escape(f: &MapExpr, seed: Complex, budget: &IterationBudget) -> OrbitOutcome {
    let radius = budget.escape_radius;
    let mut z = seed;
    for i in 0..budget.max_iters {
        let next = f.eval(z);
        if !is_finite(next) {
            return OrbitOutcome {
                final_z: z,
                steps_taken: i + 1,
                termination: Termination::Poisoned,
            };
        }
        if next.norm() > radius {
            return OrbitOutcome {
                final_z: next,
                steps_taken: i + 1,
                termination: Termination::Escaped,
            };
        }
        z = next;
    }
    OrbitOutcome {
        final_z: z,
        steps_taken: budget.max_iters,
        termination: Termination::BudgetExhausted,
    }
}

/// Approximation iteration: stop once `|f_{i+1}(z) - f_i(z)| < epsilon`.
pub fn iterate_approx(f: &MapExpr, seed: Complex, budget: &IterationBudget) -> OrbitOutcome {
    let eps = budget.epsilon;
    let mut z = seed;
    for i in 0..budget.max_iters {
        let next = f.eval(z);
        if !is_finite(next) {
            return OrbitOutcome {
                final_z: z,
                steps_taken: i + 1,
                termination: Termination::Poisoned,
            };
        }
        if (next - z).norm() < eps {
            return OrbitOutcome {
                final_z: next,
                steps_taken: i + 1,
                termination: Termination::Approximated,
            };
        }
        z = next;
    }
    OrbitOutcome {
        final_z: z,
        steps_taken: budget.max_iters,
        termination: Termination::BudgetExhausted,
    }
}
