//! Convergence diagnostics for recorded FBS traces.

use crate::error::{Error, Result};
use crate::penalty::SDiffPenalty;
use crate::vector::{top_s_split, DenseVector};

use super::SolveTrace;

/// Verifies the two descent guarantees of an FBS run with step beta and
/// gradient Lipschitz constant L:
///
/// 1. per-step: F(x_{k+1}) - F(x_k) <= (L/2 - 1/(2 beta)) ||x_{k+1} - x_k||^2,
/// 2. rate: min_{0<=k<=K} ||x_{k+1} - x_k||^2 <= 2 beta (F(x_0) - F_final)
///    / (K (1 - L beta)) for every K >= 1, with F(x_0) standing in for F(0)
///    under non-zero initialization (F(x_0) = F(0) when init is zeros).
///
/// Returns false when beta * L >= 1 (no guarantee applies) or when either
/// inequality fails beyond a 1e-10 * max(1, |F(x_0)|) slack.
pub fn check_descent_bound(trace: &SolveTrace, lipschitz: f64, beta: f64) -> bool {
    if beta <= 0.0 || lipschitz * beta >= 1.0 {
        return false;
    }
    let obj = &trace.objective_history;
    let steps = &trace.step_norm_history;
    if obj.len() != steps.len() + 1 || steps.is_empty() {
        return false;
    }
    let slack = 1e-10 * obj[0].abs().max(1.0);
    let coeff = lipschitz / 2.0 - 1.0 / (2.0 * beta);

    for k in 0..steps.len() {
        if obj[k + 1] - obj[k] > coeff * steps[k] * steps[k] + slack {
            return false;
        }
    }

    let f0 = obj[0];
    let f_final = *obj.last().unwrap();
    let mut min_sq = f64::INFINITY;
    for (k, step) in steps.iter().enumerate() {
        min_sq = min_sq.min(step * step);
        let big_k = k + 1; // K >= 1 counts the steps seen so far
        let bound = 2.0 * beta * (f0 - f_final) / (big_k as f64 * (1.0 - lipschitz * beta));
        if min_sq > bound + slack {
            return false;
        }
    }
    true
}

/// The support-exchange term Delta_k of the refined separable descent bound:
/// sum over the new off-top set of r_i(x_prev_i) minus the sum over the old
/// off-top set, both evaluated at the previous iterate.
pub fn refined_descent_delta(
    x_prev: &DenseVector,
    x_next: &DenseVector,
    penalty: &SDiffPenalty,
) -> Result<f64> {
    let reg = penalty.regularizer();
    if !reg.is_separable() {
        return Err(Error::unsupported(format!(
            "refined descent bound needs a separable regularizer, got {reg:?}"
        )));
    }
    if x_prev.len() != x_next.len() {
        return Err(Error::DimensionMismatch {
            context: "refined descent iterates",
            expected: x_prev.len(),
            got: x_next.len(),
        });
    }
    penalty.validate_dim(x_prev.len())?;
    let s = penalty.s();
    let old_rest: f64 = top_s_split(x_prev, s)?
        .rest_indices()
        .iter()
        .map(|&i| reg.scalar_eval(x_prev[i]))
        .sum();
    let new_rest: f64 = top_s_split(x_next, s)?
        .rest_indices()
        .iter()
        .map(|&i| reg.scalar_eval(x_prev[i]))
        .sum();
    Ok(new_rest - old_rest)
}
