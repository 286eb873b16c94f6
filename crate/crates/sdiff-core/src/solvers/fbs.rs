//! Forward-backward splitting: x_{k+1} = prox_{beta rho P}(x_k - beta grad phi(x_k)).
//!
//! With beta < 1/L the objective F = phi + rho P decreases monotonically and
//! the step norms vanish; `diagnostics` checks both properties on recorded
//! traces. The prox weight handed down is exactly beta * rho.

use crate::error::Result;
use crate::penalty::SDiffPenalty;
use crate::problem::LeastSquaresProblem;
use crate::prox::{prox_sdiff, ProxProblem};
use crate::vector::{top_s_split, DenseVector};

use super::{check_finite, rel_step, resolve_init, SolveTrace, SolverConfig};

/// Runs FBS for min phi(x) + rho P(x).
///
/// `cfg.rho_schedule` switches to increasing-rho continuation: each stage
/// runs to the stopping rule and seeds the next one. The adaptive-s
/// heuristic, when enabled, re-estimates the sparsity level from consecutive
/// iterates.
pub fn fbs_solve(
    prob: &LeastSquaresProblem,
    penalty: &SDiffPenalty,
    cfg: &SolverConfig,
) -> Result<SolveTrace> {
    cfg.validate()?;
    penalty.validate_dim(prob.dim())?;
    let n = prob.dim();
    let beta = cfg.resolved_step(prob.lipschitz())?;
    let max_iter = cfg.resolved_max_iter(n);
    let stages: Vec<f64> = cfg.rho_schedule.clone().unwrap_or_else(|| vec![cfg.rho]);

    let mut x = resolve_init(prob, &cfg.init)?;
    let mut pen = *penalty;
    let epsilon = cfg.adaptive_s.map(|a| {
        a.epsilon
            .unwrap_or(1e-3 * x.norm_inf().max(f64::MIN_POSITIVE))
    });

    let objective =
        |rho: f64, pen: &SDiffPenalty, x: &DenseVector| prob.loss(x) + rho * pen.eval(x);

    let mut objective_history = vec![objective(stages[0], &pen, &x)];
    let mut step_norm_history = Vec::new();
    let mut iterates = cfg.record_iterates.then(|| vec![x.clone()]);
    let mut iterations = 0usize;
    let mut converged = false;

    // Adaptive-s state: the iterate and sparsity level from one step back.
    let mut adaptive_prev: Option<(DenseVector, usize)> = None;

    for (stage, &rho) in stages.iter().enumerate() {
        let lambda = beta * rho;
        // Each continuation stage gets its own iteration budget.
        let mut stage_iterations = 0usize;
        loop {
            if stage_iterations >= max_iter {
                break;
            }
            stage_iterations += 1;
            // s_{k+1} is estimated from (x_k, x_{k-1}, s_{k-1}) and applies
            // to the prox below.
            if let Some(eps) = epsilon {
                let state = adaptive_prev.take();
                adaptive_prev = Some((x.clone(), pen.s()));
                if let Some((prev_x, prev_s)) = state {
                    let new_s = adaptive_s_update(&x, &prev_x, prev_s, eps);
                    pen = pen.with_s(new_s.min(n));
                }
            }
            let grad = prob.gradient(&x)?;
            let forward = x.axpy(-beta, &grad);
            check_finite(&forward, iterations, "fbs forward step")?;
            let prox = ProxProblem::new(pen, lambda, forward)?;
            let next = prox_sdiff(&prox)?;
            iterations += 1;
            check_finite(&next, iterations, "fbs")?;

            let step_norm = next.dist_l2(&x);
            step_norm_history.push(step_norm);
            objective_history.push(objective(rho, &pen, &next));
            if let Some(hist) = iterates.as_mut() {
                hist.push(next.clone());
            }
            let stop = rel_step(&next, &x) < cfg.tol;
            x = next;
            if stop {
                if stage + 1 == stages.len() {
                    converged = true;
                }
                break;
            }
        }
    }

    let final_rho = *stages.last().unwrap();
    let fixed_point_residual = {
        let grad = prob.gradient(&x)?;
        let forward = x.axpy(-beta, &grad);
        let prox = ProxProblem::new(pen, beta * final_rho, forward)?;
        prox_sdiff(&prox)?.dist_l2(&x)
    };

    Ok(SolveTrace {
        solution: x,
        objective_history,
        step_norm_history,
        iterations,
        converged,
        fixed_point_residual,
        iterates,
    })
}

/// Sparsity-level re-estimate: counts the entries of |x_curr| at or above
/// min(|x_prev at rank s_prev|, epsilon), clamped to [1, N].
///
/// A zero threshold (rank value 0 with the formula's min) would count every
/// coordinate, so the floor falls back to epsilon in that case.
pub fn adaptive_s_update(
    x_curr: &DenseVector,
    x_prev: &DenseVector,
    s_prev: usize,
    epsilon: f64,
) -> usize {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let n = x_curr.len();
    let s_prev = s_prev.clamp(1, x_prev.len());
    let split = top_s_split(x_prev, s_prev).expect("s_prev clamped into range");
    let rank_value = x_prev[split.permutation()[s_prev - 1]].abs();
    let mut threshold = rank_value.min(epsilon);
    if threshold <= 0.0 {
        threshold = epsilon;
    }
    let count = x_curr.iter().filter(|v| v.abs() >= threshold).count();
    count.clamp(1, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularizer::Regularizer;
    use crate::sensing::{MatrixKind, SensingMatrix};
    use crate::solvers::Init;

    fn identity_problem(b: &[f64]) -> LeastSquaresProblem {
        let n = b.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        LeastSquaresProblem::new(
            SensingMatrix::from_dense(n, n, data, MatrixKind::Custom, 0).unwrap(),
            DenseVector::new(b.to_vec()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn exact_fit_within_budget() {
        let prob = identity_problem(&[5.0, 0.0]);
        let pen = SDiffPenalty::new(Regularizer::L1, 1).unwrap();
        let trace = fbs_solve(&prob, &pen, &SolverConfig::new(0.1)).unwrap();
        assert!(trace.converged);
        assert!((trace.solution[0] - 5.0).abs() < 1e-4);
        assert!(trace.solution[1].abs() < 1e-9);
        assert!(prob.loss(&trace.solution) < 1e-8);
    }

    #[test]
    fn zero_observation_converges_immediately() {
        let prob = identity_problem(&[0.0, 0.0]);
        let pen = SDiffPenalty::new(Regularizer::L1, 1).unwrap();
        let trace = fbs_solve(&prob, &pen, &SolverConfig::new(0.1)).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.solution.as_slice(), &[0.0, 0.0]);
        assert_eq!(trace.iterations, 1);
    }

    #[test]
    fn divergence_guard_reports_iteration() {
        let prob = identity_problem(&[5.0, 1.0]);
        let pen = SDiffPenalty::new(Regularizer::L1, 1).unwrap();
        let cfg = SolverConfig {
            step: super::super::StepRule::Fixed(1e300),
            ..SolverConfig::new(1e5)
        };
        // Huge fixed step: the forward iterate overflows to +-inf.
        let err = fbs_solve(&prob, &pen, &cfg);
        assert!(err.is_err());
    }

    #[test]
    fn adaptive_s_update_examples() {
        let c = DenseVector::new(vec![5.0, 0.2, 0.0, 0.0]).unwrap();
        let p = DenseVector::new(vec![4.0, 1.0, 0.05, 0.0]).unwrap();
        assert_eq!(adaptive_s_update(&c, &p, 2, 0.5), 1);

        // Stationary case: threshold below the support magnitudes.
        let x = DenseVector::new(vec![3.0, -2.0, 0.0]).unwrap();
        assert_eq!(adaptive_s_update(&x, &x, 2, 0.1), 2);

        // Zero current iterate clamps to 1.
        let z = DenseVector::zeros(4);
        assert_eq!(adaptive_s_update(&z, &p, 2, 0.5), 1);
    }

    #[test]
    fn continuation_reaches_feasibility() {
        let prob = identity_problem(&[3.0, 1.0, -0.5, 0.2]);
        let pen = SDiffPenalty::new(Regularizer::L1, 2).unwrap();
        let cfg = SolverConfig {
            rho_schedule: Some(vec![0.01, 0.1, 1.0, 10.0]),
            ..SolverConfig::new(0.01)
        };
        let trace = fbs_solve(&prob, &pen, &cfg).unwrap();
        assert!(
            pen.eval(&trace.solution) <= 1e-8,
            "P = {}",
            pen.eval(&trace.solution)
        );
    }

    #[test]
    fn warm_start_runs() {
        let prob = identity_problem(&[5.0, 0.0, 0.0]);
        let pen = SDiffPenalty::new(Regularizer::L1, 1).unwrap();
        let cfg = SolverConfig::new(0.1).with_init(Init::L1AdmmWarmStart {
            rho: 1e-6,
            iters: None,
        });
        let trace = fbs_solve(&prob, &pen, &cfg).unwrap();
        assert!((trace.solution[0] - 5.0).abs() < 1e-4);
    }
}
