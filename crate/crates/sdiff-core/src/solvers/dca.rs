//! Difference-of-convex solvers: proximal DCA and DCA with an inner ADMM.
//!
//! Both linearize the concave part -rho P2 at the current iterate through a
//! subgradient w and solve the remaining convex problem; PDCA additionally
//! majorizes the smooth loss so its subproblem is a single shrinkage step.

use crate::error::{Error, Result};
use crate::penalty::SDiffPenalty;
use crate::problem::LeastSquaresProblem;
use crate::prox::shrink;
use crate::regularizer::Regularizer;
use crate::vector::{top_s_split, DenseVector};

use super::admm::{AdmmConfig, L1Admm};
use super::{check_finite, rel_step, resolve_init, SolveTrace, SolverConfig};

/// Proximal DCA: x_{k+1} = argmin rho P1(x) + (L/2) ||x - v_k||^2 with
/// v_k = x_k - (grad phi(x_k) - rho w_k) / L and w_k in dP2(x_k).
///
/// Supported penalties are the ones whose convex part P1 admits a one-shot
/// resolvent: R = l1 (P1 = ||x||_1, soft shrinkage) and R = l2 squared
/// (P1 = ||x||_2^2, a rescale). Other bases route through `dca_admm_solve`.
pub fn pdca_solve(
    prob: &LeastSquaresProblem,
    penalty: &SDiffPenalty,
    cfg: &SolverConfig,
) -> Result<SolveTrace> {
    cfg.validate()?;
    penalty.validate_dim(prob.dim())?;
    enum Subproblem {
        Shrink,
        Rescale,
    }
    let subproblem = match penalty.regularizer() {
        Regularizer::L1 => Subproblem::Shrink,
        Regularizer::L2Squared => Subproblem::Rescale,
        other => {
            return Err(Error::unsupported(format!(
            "PDCA needs a shrinkage-compatible convex part; {other:?} is not, use dca_admm or fbs"
        )))
        }
    };

    let n = prob.dim();
    let rho = cfg.rho;
    let lip = prob.lipschitz();
    let max_iter = cfg.resolved_max_iter(n);
    let mut x = resolve_init(prob, &cfg.init)?;

    let objective = |x: &DenseVector| prob.loss(x) + rho * penalty.eval(x);
    let mut objective_history = vec![objective(&x)];
    let mut step_norm_history = Vec::new();
    let mut iterates = cfg.record_iterates.then(|| vec![x.clone()]);
    let mut converged = false;
    let mut iterations = 0;
    let mut last_rel = f64::INFINITY;

    for k in 0..max_iter {
        let w = penalty.p2_subgradient(&x);
        let grad = prob.gradient(&x)?;
        // v = x - (grad - rho w) / L
        let v: Vec<f64> = (0..n)
            .map(|i| x[i] - (grad[i] - rho * w[i]) / lip)
            .collect();
        let next: Vec<f64> = match subproblem {
            Subproblem::Shrink => v.iter().map(|&vi| shrink(vi, rho / lip)).collect(),
            Subproblem::Rescale => v.iter().map(|&vi| lip * vi / (lip + 2.0 * rho)).collect(),
        };
        let next = DenseVector::from_raw(next);
        check_finite(&next, k, "pdca")?;
        iterations += 1;
        step_norm_history.push(next.dist_l2(&x));
        objective_history.push(objective(&next));
        if let Some(hist) = iterates.as_mut() {
            hist.push(next.clone());
        }
        last_rel = rel_step(&next, &x);
        x = next;
        if last_rel < cfg.tol {
            converged = true;
            break;
        }
    }

    Ok(SolveTrace {
        solution: x,
        objective_history,
        step_norm_history,
        iterations,
        converged,
        fixed_point_residual: last_rel,
        iterates,
    })
}

/// Linearization used by the ADMM-based DCA outer loop.
fn dca_weight(penalty: &SDiffPenalty, x: &DenseVector) -> Result<DenseVector> {
    match penalty.regularizer() {
        // Standard DCA: w in dP2 = d||x^s||_1.
        Regularizer::L1 => Ok(penalty.p2_subgradient(x)),
        // Generalized mode: the subproblem keeps rho ||x||_1 and the rest of
        // the penalty, a ||x||_2 + ||x^s||_1 - a ||x^s||_2, is linearized
        // even though it is not convex.
        Regularizer::L1MinusL2 { a } => {
            let n = x.len();
            let split = top_s_split(x, penalty.s())?;
            let norm = x.norm_l2();
            let mut w = vec![0.0; n];
            if norm > 0.0 {
                for i in 0..n {
                    w[i] = a * x[i] / norm;
                }
            }
            let xs_norm = {
                let mut acc = 0.0;
                for &i in split.top_indices() {
                    acc += x[i] * x[i];
                }
                acc.sqrt()
            };
            for &i in split.top_indices() {
                w[i] += sgn(x[i]);
                if xs_norm > 0.0 {
                    w[i] -= a * x[i] / xs_norm;
                }
            }
            Ok(DenseVector::from_raw(w))
        }
        other => Err(Error::unsupported(format!(
            "dca_admm supports R = l1 and R = l1 - a*l2, got {other:?}"
        ))),
    }
}

/// DCA outer loop with each convex subproblem
/// min 1/2 ||Ax-b||^2 + rho ||v||_1 - rho <w, x>, x = v solved by scaled
/// ADMM. Outer iterations are capped by `inner.max_outer`; inner sweeps by
/// 5N or `inner.max_sweeps`, whichever is set.
pub fn dca_admm_solve(
    prob: &LeastSquaresProblem,
    penalty: &SDiffPenalty,
    cfg: &SolverConfig,
    inner: &AdmmConfig,
) -> Result<SolveTrace> {
    cfg.validate()?;
    penalty.validate_dim(prob.dim())?;
    // Surface unsupported regularizers before any work.
    dca_weight(penalty, &DenseVector::zeros(prob.dim()))?;
    let objective = |x: &DenseVector| prob.loss(x) + cfg.rho * penalty.eval(x);
    run_dca_admm(prob, cfg, inner, objective, |x| dca_weight(penalty, x))
}

/// The l1-l2 DCA baseline: penalty rho (||x||_1 - ||x||_2), linearized with
/// w = x / ||x||_2 (zero at the origin).
pub fn l12_dca_solve(
    prob: &LeastSquaresProblem,
    rho: f64,
    cfg: &SolverConfig,
    inner: &AdmmConfig,
) -> Result<SolveTrace> {
    let cfg = SolverConfig { rho, ..cfg.clone() };
    cfg.validate()?;
    let objective = |x: &DenseVector| prob.loss(x) + rho * (x.norm_l1() - x.norm_l2());
    run_dca_admm(prob, &cfg, inner, objective, |x| {
        let norm = x.norm_l2();
        Ok(if norm > 0.0 {
            x.scale(1.0 / norm)
        } else {
            DenseVector::zeros(x.len())
        })
    })
}

fn run_dca_admm(
    prob: &LeastSquaresProblem,
    cfg: &SolverConfig,
    inner: &AdmmConfig,
    objective: impl Fn(&DenseVector) -> f64,
    weight: impl Fn(&DenseVector) -> Result<DenseVector>,
) -> Result<SolveTrace> {
    let n = prob.dim();
    let max_sweeps = inner.max_sweeps.unwrap_or(5 * n);
    let mut outer_x = resolve_init(prob, &cfg.init)?;

    let mut admm = L1Admm::new(prob, cfg.rho, inner.resolved_mu(cfg.rho))?;
    // Warm start the splitting variables at the initial iterate.
    admm.v = outer_x.clone();
    admm.x = outer_x.clone();

    let mut objective_history = vec![objective(&outer_x)];
    let mut step_norm_history = Vec::new();
    let mut iterates = cfg.record_iterates.then(|| vec![outer_x.clone()]);
    let mut total_sweeps = 0usize;
    let mut converged = false;
    let mut last_rel = f64::INFINITY;

    for outer in 0..inner.max_outer {
        let w = weight(&outer_x)?;
        for _ in 0..max_sweeps {
            let (primal, dual) = admm.sweep(Some(&w));
            total_sweeps += 1;
            if primal < inner.residual_tol && dual < inner.residual_tol {
                break;
            }
        }
        check_finite(&admm.v, outer, "dca-admm")?;
        let next = admm.v.clone();
        step_norm_history.push(next.dist_l2(&outer_x));
        objective_history.push(objective(&next));
        if let Some(hist) = iterates.as_mut() {
            hist.push(next.clone());
        }
        last_rel = rel_step(&next, &outer_x);
        outer_x = next;
        if last_rel < cfg.tol {
            converged = true;
            break;
        }
    }

    Ok(SolveTrace {
        solution: outer_x,
        objective_history,
        step_norm_history,
        iterations: total_sweeps,
        converged,
        fixed_point_residual: last_rel,
        iterates,
    })
}

fn sgn(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensing::{MatrixKind, SensingMatrix};

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
    fn pdca_exact_sparse_fit() {
        let prob = identity_problem(&[5.0, 0.0]);
        let pen = SDiffPenalty::new(Regularizer::L1, 1).unwrap();
        let trace = pdca_solve(&prob, &pen, &SolverConfig::new(0.1)).unwrap();
        assert!(
            (trace.solution[0] - 5.0).abs() < 1e-3,
            "{:?}",
            trace.solution.as_slice()
        );
        assert!(trace.solution[1].abs() < 1e-9);
    }

    #[test]
    fn pdca_zero_observation() {
        let prob = identity_problem(&[0.0, 0.0]);
        let pen = SDiffPenalty::new(Regularizer::L1, 1).unwrap();
        let trace = pdca_solve(&prob, &pen, &SolverConfig::new(0.1)).unwrap();
        assert_eq!(trace.solution.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn pdca_rejects_unsupported_penalty() {
        let prob = identity_problem(&[1.0, 0.0]);
        let pen = SDiffPenalty::new(Regularizer::L2, 1).unwrap();
        assert!(pdca_solve(&prob, &pen, &SolverConfig::new(0.1)).is_err());
    }

    #[test]
    fn dca_admm_exact_sparse_fit() {
        let prob = identity_problem(&[5.0, 0.0]);
        let pen = SDiffPenalty::new(Regularizer::L1, 1).unwrap();
        let trace =
            dca_admm_solve(&prob, &pen, &SolverConfig::new(0.1), &AdmmConfig::default()).unwrap();
        assert!(
            (trace.solution[0] - 5.0).abs() < 1e-4,
            "{:?}",
            trace.solution.as_slice()
        );
        assert!(trace.solution[1].abs() < 1e-9);
    }

    #[test]
    fn dca_admm_generalized_mode_runs() {
        let prob = identity_problem(&[5.0, 1.0, 0.0]);
        let pen = SDiffPenalty::new(Regularizer::L1MinusL2 { a: 1.0 }, 2).unwrap();
        let trace =
            dca_admm_solve(&prob, &pen, &SolverConfig::new(0.1), &AdmmConfig::default()).unwrap();
        assert!((trace.solution[0] - 5.0).abs() < 1e-3);
    }

    #[test]
    fn l12_dca_small_rho_recovers_support() {
        let prob = identity_problem(&[5.0, 0.0]);
        let trace = l12_dca_solve(
            &prob,
            0.01,
            &SolverConfig::new(0.01),
            &AdmmConfig::default(),
        )
        .unwrap();
        assert!(
            (trace.solution[0] - 5.0).abs() < 1e-2,
            "{:?}",
            trace.solution.as_slice()
        );
        assert!(trace.solution[1].abs() < 1e-8);
    }

    #[test]
    fn l12_dca_zero_observation() {
        let prob = identity_problem(&[0.0, 0.0]);
        let trace =
            l12_dca_solve(&prob, 0.1, &SolverConfig::new(0.1), &AdmmConfig::default()).unwrap();
        assert_eq!(trace.solution.as_slice(), &[0.0, 0.0]);
    }
}
