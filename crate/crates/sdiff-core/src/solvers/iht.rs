//! Hard-thresholding baselines: accelerated IHT and iterative half
//! thresholding (the l_{1/2} operator), included for benchmark parity.

use crate::error::{Error, Result};
use crate::problem::LeastSquaresProblem;
use crate::vector::{truncate, DenseVector};

use super::{check_finite, rel_step, resolve_init, SolveTrace, SolverConfig};

/// Accelerated IHT: gradient step + hard truncation to s terms, with a
/// Nesterov-style extrapolation that is kept only when it yields the lower
/// residual 1/2 ||Ax-b||^2.
///
/// The default step rule is the accelerated-IHT one: beta_k =
/// ||g_S||^2 / ||A g_S||^2 with g_S the gradient restricted to the current
/// support (the full gradient while the iterate is zero). Fixed or
/// Lipschitz-fraction steps from the config are honored as given.
pub fn aiht_solve(prob: &LeastSquaresProblem, s: usize, cfg: &SolverConfig) -> Result<SolveTrace> {
    let n = prob.dim();
    if s < 1 || s > n {
        return Err(Error::param(format!(
            "sparsity level s={s} out of range 1..={n}"
        )));
    }
    let fixed_beta = match cfg.step {
        super::StepRule::NormalizedSupport => None,
        _ => Some(cfg.resolved_step(prob.lipschitz())?),
    };
    let max_iter = cfg.resolved_max_iter(n);
    let mut x = resolve_init(prob, &cfg.init)?;
    let mut x_prev = x.clone();
    let mut t = 1.0f64;

    let mut objective_history = vec![prob.loss(&x)];
    let mut step_norm_history = Vec::new();
    let mut iterates = cfg.record_iterates.then(|| vec![x.clone()]);
    let mut converged = false;
    let mut iterations = 0;
    let mut last_rel = f64::INFINITY;

    for k in 0..max_iter {
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let gamma = (t - 1.0) / t_next;

        let plain = iht_step(prob, &x, fixed_beta, s)?;
        let next = if gamma > 0.0 {
            let z = x.axpy(gamma, &x.sub(&x_prev));
            let accel = iht_step(prob, &z, fixed_beta, s)?;
            if prob.loss(&accel) < prob.loss(&plain) {
                accel
            } else {
                plain
            }
        } else {
            plain
        };
        check_finite(&next, k, "aiht")?;

        iterations += 1;
        step_norm_history.push(next.dist_l2(&x));
        objective_history.push(prob.loss(&next));
        if let Some(hist) = iterates.as_mut() {
            hist.push(next.clone());
        }
        last_rel = rel_step(&next, &x);
        x_prev = x;
        x = next;
        t = t_next;
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

fn iht_step(
    prob: &LeastSquaresProblem,
    x: &DenseVector,
    fixed_beta: Option<f64>,
    s: usize,
) -> Result<DenseVector> {
    let grad = prob.gradient(x)?;
    let beta = match fixed_beta {
        Some(b) => b,
        None => normalized_step(prob, x, &grad),
    };
    truncate(&x.axpy(-beta, &grad), s)
}

/// ||g_S||^2 / ||A g_S||^2 on the support of x (full gradient at x = 0);
/// falls back to the safe Lipschitz step when the restricted gradient
/// vanishes.
fn normalized_step(prob: &LeastSquaresProblem, x: &DenseVector, grad: &DenseVector) -> f64 {
    let restricted: Vec<f64> = if x.norm_l0() == 0 {
        grad.as_slice().to_vec()
    } else {
        x.iter()
            .zip(grad.iter())
            .map(|(&xi, &gi)| if xi != 0.0 { gi } else { 0.0 })
            .collect()
    };
    let g = DenseVector::from_raw(restricted);
    let num = g.norm_l2_sq();
    let den = prob.matrix().matvec(&g).norm_l2_sq();
    if num > 0.0 && den > 0.0 {
        num / den
    } else {
        0.99 / prob.lipschitz()
    }
}

/// Iterative half thresholding for 1/2 ||Ax-b||^2 + rho sum_i |x_i|^{1/2}.
pub fn half_threshold_solve(
    prob: &LeastSquaresProblem,
    rho: f64,
    cfg: &SolverConfig,
) -> Result<SolveTrace> {
    if !(rho > 0.0) {
        return Err(Error::param(format!("rho must be positive, got {rho}")));
    }
    let n = prob.dim();
    let beta = cfg.resolved_step(prob.lipschitz())?;
    let max_iter = cfg.resolved_max_iter(n);
    let lambda = 2.0 * rho * beta;
    let mut x = resolve_init(prob, &cfg.init)?;

    let objective =
        |x: &DenseVector| prob.loss(x) + rho * x.iter().map(|v| v.abs().sqrt()).sum::<f64>();
    let mut objective_history = vec![objective(&x)];
    let mut step_norm_history = Vec::new();
    let mut iterates = cfg.record_iterates.then(|| vec![x.clone()]);
    let mut converged = false;
    let mut iterations = 0;
    let mut last_rel = f64::INFINITY;

    for k in 0..max_iter {
        let grad = prob.gradient(&x)?;
        let forward = x.axpy(-beta, &grad);
        let next =
            DenseVector::from_raw(forward.iter().map(|&u| half_threshold(u, lambda)).collect());
        check_finite(&next, k, "half-thresholding")?;

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

/// Scalar resolvent of argmin_t (t - u)^2 + lambda |t|^{1/2}: zero below the
/// threshold (54^{1/3}/4) lambda^{2/3}, a trigonometric root above it.
pub(crate) fn half_threshold(u: f64, lambda: f64) -> f64 {
    let threshold = 54f64.powf(1.0 / 3.0) / 4.0 * lambda.powf(2.0 / 3.0);
    if u.abs() <= threshold {
        return 0.0;
    }
    let phi = ((lambda / 8.0) * (u.abs() / 3.0).powf(-1.5)).acos();
    2.0 / 3.0 * u * (1.0 + (2.0 * std::f64::consts::PI / 3.0 - 2.0 / 3.0 * phi).cos())
}
