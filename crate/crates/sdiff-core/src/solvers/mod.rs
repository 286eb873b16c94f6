//! Solvers for min_x ||Ax - b||^2 / 2 + rho * P(x).
//!
//! `fbs` is the main forward-backward splitting loop built on the
//! closed-form prox; `dca` holds the proximal DCA and the DCA whose convex
//! subproblem is solved by ADMM; `admm` is the plain l1 baseline (also the
//! warm start); `iht` has the hard-thresholding and half-thresholding
//! baselines. All solvers share the relative-step stopping rule
//! ||x_k - x_{k-1}|| / max(||x_k||, 1) < tol and a 5N default iteration cap.

mod admm;
mod bounds;
mod dca;
mod diagnostics;
mod fbs;
mod iht;

pub use admm::{l1_admm_solve, l1_admm_solve_with, l1_admm_trace, AdmmConfig};
pub use bounds::{rho_lower_bound, BoundKind};
pub use dca::{dca_admm_solve, l12_dca_solve, pdca_solve};
pub use diagnostics::{check_descent_bound, refined_descent_delta};
pub use fbs::{adaptive_s_update, fbs_solve};
pub use iht::{aiht_solve, half_threshold_solve};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::LeastSquaresProblem;
use crate::vector::DenseVector;

/// Step-size rule for gradient-based solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// beta = fraction / L with L = ||A||_2^2; descent is guaranteed for
    /// fraction < 1.
    FractionOfLipschitz(f64),
    /// Explicit beta with no safety check (the reference experiments use
    /// beta = 10 rho, which violates the beta < 1/L requirement).
    Fixed(f64),
    /// Per-iteration beta_k = ||g_S||^2 / ||A g_S||^2 on the current
    /// support. Only honored by the hard-thresholding solver (the
    /// accelerated-IHT step rule); everything else treats it as the
    /// guaranteed-descent default.
    NormalizedSupport,
}

/// Initialization strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    Zeros,
    /// l1-ADMM warm start; `iters` defaults to N.
    L1AdmmWarmStart {
        rho: f64,
        iters: Option<usize>,
    },
    Given(DenseVector),
}

/// Adaptive sparsity-level heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveSConfig {
    /// Magnitude floor; defaults to 1e-3 * ||x_0||_inf.
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Penalty weight rho.
    pub rho: f64,
    pub step: StepRule,
    /// Defaults to 5N.
    pub max_iter: Option<usize>,
    pub tol: f64,
    pub init: Init,
    pub adaptive_s: Option<AdaptiveSConfig>,
    /// Increasing-rho continuation; each stage runs to the stopping rule
    /// (with its own `max_iter` budget) and hands its iterate to the next.
    pub rho_schedule: Option<Vec<f64>>,
    /// Keep every iterate in the trace (per-iteration error curves).
    pub record_iterates: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rho: 0.1,
            step: StepRule::FractionOfLipschitz(0.99),
            max_iter: None,
            tol: 1e-5,
            init: Init::Zeros,
            adaptive_s: None,
            rho_schedule: None,
            record_iterates: false,
        }
    }
}

impl SolverConfig {
    pub fn new(rho: f64) -> Self {
        Self {
            rho,
            ..Self::default()
        }
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = Some(max_iter);
        self
    }

    pub(crate) fn resolved_max_iter(&self, n: usize) -> usize {
        self.max_iter.unwrap_or(5 * n)
    }

    pub(crate) fn resolved_step(&self, lipschitz: f64) -> Result<f64> {
        let beta = match self.step {
            StepRule::FractionOfLipschitz(f) => {
                if !(f > 0.0) || !f.is_finite() {
                    return Err(Error::param(format!(
                        "step fraction must be positive, got {f}"
                    )));
                }
                f / lipschitz
            }
            StepRule::Fixed(b) => b,
            StepRule::NormalizedSupport => 0.99 / lipschitz,
        };
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::param(format!(
                "step size must be positive, got {beta}"
            )));
        }
        Ok(beta)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::param(format!(
                "rho must be positive, got {}",
                self.rho
            )));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::param("tol must be nonnegative"));
        }
        if let Some(schedule) = &self.rho_schedule {
            if schedule.is_empty() {
                return Err(Error::param("rho_schedule must be non-empty"));
            }
            if schedule.windows(2).any(|w| w[1] <= w[0]) || schedule[0] <= 0.0 {
                return Err(Error::param("rho_schedule must be positive and increasing"));
            }
        }
        Ok(())
    }
}

/// Iterate history of one solve.
#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub solution: DenseVector,
    /// Objective value at the initial point and after every iteration.
    pub objective_history: Vec<f64>,
    /// ||x_{k+1} - x_k||_2 per iteration.
    pub step_norm_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// For FBS: ||x - prox_{beta rho P}(x - beta grad phi(x))||_2 at the
    /// final iterate. Other solvers report their final relative step.
    pub fixed_point_residual: f64,
    /// Present when `record_iterates` was set.
    pub iterates: Option<Vec<DenseVector>>,
}

/// Stopping quantity of the reference experiments.
pub(crate) fn rel_step(new: &DenseVector, old: &DenseVector) -> f64 {
    new.dist_l2(old) / new.norm_l2().max(1.0)
}

pub(crate) fn check_finite(x: &DenseVector, iteration: usize, solver: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Divergence {
            iteration,
            context: format!("{solver} produced a non-finite iterate"),
        })
    }
}

/// Shared initialization logic.
pub(crate) fn resolve_init(prob: &LeastSquaresProblem, init: &Init) -> Result<DenseVector> {
    match init {
        Init::Zeros => Ok(DenseVector::zeros(prob.dim())),
        Init::L1AdmmWarmStart { rho, iters } => {
            let sweeps = iters.unwrap_or(prob.dim());
            if sweeps < 1 {
                return Err(Error::param("warm-start iteration count must be >= 1"));
            }
            l1_admm_solve(prob, *rho, sweeps)
        }
        Init::Given(x0) => {
            if x0.len() != prob.dim() {
                return Err(Error::DimensionMismatch {
                    context: "initial iterate",
                    expected: prob.dim(),
                    got: x0.len(),
                });
            }
            Ok(x0.clone())
        }
    }
}
