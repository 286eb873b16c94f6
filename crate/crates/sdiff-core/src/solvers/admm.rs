//! Scaled ADMM for l1-regularized least squares, shared by the l1 baseline,
//! the warm start, and the DCA subproblems.
//!
//! The x-update solves (A^T A + mu I) x = c through the matrix inversion
//! lemma: (A^T A + mu I)^{-1} c = (c - A^T (mu I + A A^T)^{-1} A c) / mu,
//! so only an M x M Cholesky factor is kept.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::LeastSquaresProblem;
use crate::prox::shrink;
use crate::sensing::SensingMatrix;
use crate::vector::DenseVector;

use super::{check_finite, rel_step, SolveTrace, SolverConfig};

/// Inner-ADMM settings (also carries the DCA outer-loop cap).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdmmConfig {
    /// Augmented penalty mu; `None` scales it with the l1 weight
    /// (mu = 100 rho clamped to [1e-4, 1]). A fixed mu = 1 stalls badly
    /// when rho is tiny: the per-sweep shrinkage rho/mu vanishes and the
    /// splitting crawls.
    pub mu: Option<f64>,
    /// Inner sweep cap; defaults to 5N.
    pub max_sweeps: Option<usize>,
    /// Primal/dual residual tolerance.
    pub residual_tol: f64,
    /// DCA outer-iteration cap.
    pub max_outer: usize,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        Self {
            mu: None,
            max_sweeps: None,
            residual_tol: 1e-8,
            max_outer: 20,
        }
    }
}

impl AdmmConfig {
    pub fn resolved_mu(&self, rho: f64) -> f64 {
        self.mu.unwrap_or((100.0 * rho).clamp(1e-4, 1.0))
    }
}

/// Cached factorization of mu I + A A^T (SPD for mu > 0, so the Cholesky
/// cannot fail on finite inputs).
pub(crate) struct NormalEquations {
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    mu: f64,
}

impl NormalEquations {
    pub(crate) fn new(a: &SensingMatrix, mu: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::param(format!(
                "ADMM penalty mu must be positive, got {mu}"
            )));
        }
        let m = a.rows();
        let gram = DMatrix::from_fn(m, m, |i, j| {
            let d: f64 = a.row(i).iter().zip(a.row(j)).map(|(x, y)| x * y).sum();
            if i == j {
                d + mu
            } else {
                d
            }
        });
        let chol = nalgebra::Cholesky::new(gram)
            .ok_or_else(|| Error::param("Cholesky of mu I + A A^T failed (non-finite matrix?)"))?;
        Ok(Self { chol, mu })
    }

    /// (A^T A + mu I)^{-1} c.
    pub(crate) fn solve(&self, a: &SensingMatrix, c: &DenseVector) -> DenseVector {
        let ac = a.matvec(c);
        let t = self.chol.solve(&DVector::from_vec(ac.into_vec()));
        let at = a.matvec_t(&DenseVector::from_raw(t.as_slice().to_vec()));
        DenseVector::from_raw(
            c.iter()
                .zip(at.iter())
                .map(|(ci, ai)| (ci - ai) / self.mu)
                .collect(),
        )
    }
}

/// One ADMM sweep state for min 1/2 ||Ax-b||^2 + rho ||v||_1 - rho <w, x>,
/// x = v. `w = None` is the plain lasso.
pub(crate) struct L1Admm<'a> {
    prob: &'a LeastSquaresProblem,
    normal: NormalEquations,
    atb: DenseVector,
    rho: f64,
    mu: f64,
    pub x: DenseVector,
    pub v: DenseVector,
    pub u: DenseVector,
}

impl<'a> L1Admm<'a> {
    pub(crate) fn new(prob: &'a LeastSquaresProblem, rho: f64, mu: f64) -> Result<Self> {
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(Error::param(format!("rho must be nonnegative, got {rho}")));
        }
        let n = prob.dim();
        Ok(Self {
            prob,
            normal: NormalEquations::new(prob.matrix(), mu)?,
            atb: prob.matrix().matvec_t(prob.observation()),
            rho,
            mu,
            x: DenseVector::zeros(n),
            v: DenseVector::zeros(n),
            u: DenseVector::zeros(n),
        })
    }

    /// One sweep; returns (primal residual, dual residual).
    pub(crate) fn sweep(&mut self, w: Option<&DenseVector>) -> (f64, f64) {
        let n = self.prob.dim();
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let lin = match w {
                Some(w) => self.rho * w[i],
                None => 0.0,
            };
            c.push(self.atb[i] + lin + self.mu * (self.v[i] - self.u[i]));
        }
        self.x = self
            .normal
            .solve(self.prob.matrix(), &DenseVector::from_raw(c));
        let v_old = std::mem::replace(&mut self.v, DenseVector::zeros(n));
        let thresh = self.rho / self.mu;
        let mut v = Vec::with_capacity(n);
        let mut u = Vec::with_capacity(n);
        for i in 0..n {
            let xi_ui = self.x[i] + self.u[i];
            let vi = shrink(xi_ui, thresh);
            v.push(vi);
            u.push(xi_ui - vi);
        }
        self.v = DenseVector::from_raw(v);
        self.u = DenseVector::from_raw(u);
        let primal = self.x.dist_l2(&self.v);
        let dual = self.mu * self.v.dist_l2(&v_old);
        (primal, dual)
    }
}

/// Standard ADMM for 1/2 ||Ax-b||^2 + rho ||x||_1; returns the sparse
/// iterate after exactly `iters` sweeps. Used as the warm start.
pub fn l1_admm_solve(prob: &LeastSquaresProblem, rho: f64, iters: usize) -> Result<DenseVector> {
    l1_admm_solve_with(prob, rho, iters, &AdmmConfig::default())
}

/// `l1_admm_solve` with explicit ADMM settings.
pub fn l1_admm_solve_with(
    prob: &LeastSquaresProblem,
    rho: f64,
    iters: usize,
    admm_cfg: &AdmmConfig,
) -> Result<DenseVector> {
    if iters < 1 {
        return Err(Error::param("iteration count must be >= 1"));
    }
    let mut admm = L1Admm::new(prob, rho, admm_cfg.resolved_mu(rho))?;
    for k in 0..iters {
        admm.sweep(None);
        check_finite(&admm.x, k, "l1-admm")?;
    }
    Ok(admm.v)
}

/// l1-ADMM baseline with the shared stopping rule, for benchmark parity.
pub fn l1_admm_trace(
    prob: &LeastSquaresProblem,
    rho: f64,
    cfg: &SolverConfig,
) -> Result<SolveTrace> {
    let n = prob.dim();
    let max_iter = cfg.resolved_max_iter(n);
    let mut admm = L1Admm::new(prob, rho, AdmmConfig::default().resolved_mu(rho))?;
    let objective = |x: &DenseVector| prob.loss(x) + rho * x.norm_l1();

    let mut objective_history = vec![objective(&admm.v)];
    let mut step_norm_history = Vec::new();
    let mut iterates = cfg.record_iterates.then(|| vec![admm.v.clone()]);
    let mut converged = false;
    let mut iterations = 0;
    let mut last_rel = f64::INFINITY;

    for k in 0..max_iter {
        let prev = admm.v.clone();
        admm.sweep(None);
        check_finite(&admm.x, k, "l1-admm")?;
        iterations += 1;
        step_norm_history.push(admm.v.dist_l2(&prev));
        objective_history.push(objective(&admm.v));
        if let Some(hist) = iterates.as_mut() {
            hist.push(admm.v.clone());
        }
        last_rel = rel_step(&admm.v, &prev);
        if last_rel < cfg.tol {
            converged = true;
            break;
        }
    }
    Ok(SolveTrace {
        solution: admm.v,
        objective_history,
        step_norm_history,
        iterations,
        converged,
        fixed_point_residual: last_rel,
        iterates,
    })
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
    fn identity_lasso_soft_thresholds() {
        // min 1/2||x-b||^2 + 0.5||x||_1 -> shrink(b, 0.5) = (4.5, 0)
        let prob = identity_problem(&[5.0, 0.0]);
        let x = l1_admm_solve(&prob, 0.5, 400).unwrap();
        assert!((x[0] - 4.5).abs() < 1e-6, "{}", x[0]);
        assert!(x[1].abs() < 1e-9);
    }

    #[test]
    fn zero_rho_gives_least_squares() {
        let prob = identity_problem(&[2.0, -1.0]);
        let x = l1_admm_solve(&prob, 0.0, 400).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-6);
        assert!((x[1] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn zero_observation_stays_zero() {
        let prob = identity_problem(&[0.0, 0.0, 0.0]);
        let x = l1_admm_solve(&prob, 0.5, 50).unwrap();
        assert_eq!(x.as_slice(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_zero_iters() {
        let prob = identity_problem(&[1.0]);
        assert!(l1_admm_solve(&prob, 0.1, 0).is_err());
    }

    #[test]
    fn traced_variant_converges_with_stopping_rule() {
        let prob = identity_problem(&[5.0, 0.0]);
        let cfg = SolverConfig {
            rho: 0.5,
            tol: 1e-9,
            max_iter: Some(500),
            ..Default::default()
        };
        let trace = l1_admm_trace(&prob, 0.5, &cfg).unwrap();
        assert!(trace.converged);
        assert!((trace.solution[0] - 4.5).abs() < 1e-6);
    }
}
