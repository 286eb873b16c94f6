//! Closed-form proximal operators of lambda * P for the s-difference penalty.
//!
//! prox_{lambda P}(y) = argmin_x ||x - y||^2 / (2 lambda) + P(x). On the
//! canonical top-s set of y the separable operators keep y unchanged and
//! apply the scalar resolvent of R off it; the two non-separable cases
//! (R = l2 and R = l1 - a*l2) rescale the top block and the shrunk tail by
//! factors that come out of the first-order conditions in closed form.
//!
//! Every operator here is validated against `prox_oracle`, an independent
//! multi-start descent on the prox objective.

mod oracle;

pub use oracle::prox_oracle;

use crate::error::{Error, Result};
use crate::penalty::SDiffPenalty;
use crate::regularizer::Regularizer;
use crate::vector::{top_s_split, truncate_with, DenseVector};

/// A prox instance: penalty, step weight lambda and the anchor y.
#[derive(Debug, Clone)]
pub struct ProxProblem {
    pub penalty: SDiffPenalty,
    pub lambda: f64,
    pub y: DenseVector,
}

impl ProxProblem {
    pub fn new(penalty: SDiffPenalty, lambda: f64, y: DenseVector) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::param(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if !y.is_finite() {
            return Err(Error::param("prox anchor must be finite"));
        }
        penalty.validate_dim(y.len())?;
        Ok(Self { penalty, lambda, y })
    }

    /// The prox objective E(x) = ||x - y||^2 / (2 lambda) + P(x).
    pub fn objective(&self, x: &DenseVector) -> f64 {
        x.dist_l2(&self.y).powi(2) / (2.0 * self.lambda) + self.penalty.eval(x)
    }
}

/// Soft shrinkage: sign(v) * max(|v| - lambda, 0).
pub fn shrink(v: f64, lambda: f64) -> f64 {
    debug_assert!(lambda >= 0.0);
    if v > lambda {
        v - lambda
    } else if v < -lambda {
        v + lambda
    } else {
        0.0
    }
}

/// Dispatches to the closed-form operator for the penalty's base regularizer.
///
/// Errors with `Unsupported` for regularizers whose prox has no closed form
/// in the source analysis (Huber/log/MCP of the l2 norm, SCAD, weighted LSP);
/// those route through `prox_oracle` at toy sizes or through the DCA solvers.
pub fn prox_sdiff(p: &ProxProblem) -> Result<DenseVector> {
    let s = p.penalty.s();
    let y = &p.y;
    let lambda = p.lambda;
    match p.penalty.regularizer() {
        Regularizer::L1 => Ok(prox_l1(s, lambda, y)),
        Regularizer::L2Squared => Ok(prox_l2sq(s, lambda, y)),
        Regularizer::L2 => Ok(prox_l2(s, lambda, y)),
        Regularizer::L1MinusL2 { a } => prox_l1_minus_al2(a, s, lambda, y),
        Regularizer::Mcp { theta } => Ok(prox_mcp(theta, s, lambda, y)),
        Regularizer::Lsp { theta } => Ok(prox_lsp(theta, s, lambda, y)),
        other => Err(Error::unsupported(format!(
            "no closed-form prox for {other:?}; use prox_oracle (small N) or a DCA solver"
        ))),
    }
}

/// R = ||x||_1: keep the top-s block, soft-shrink the rest.
pub fn prox_l1(s: usize, lambda: f64, y: &DenseVector) -> DenseVector {
    let split = top_s_split(y, s).expect("s must be within 1..=N");
    let mut x = y.as_slice().to_vec();
    for &i in split.rest_indices() {
        x[i] = shrink(y[i], lambda);
    }
    DenseVector::from_raw(x)
}

/// R = ||x||_2^2: keep the top-s block, scale the rest by 1/(2 lambda + 1).
pub fn prox_l2sq(s: usize, lambda: f64, y: &DenseVector) -> DenseVector {
    let split = top_s_split(y, s).expect("s must be within 1..=N");
    let mut x = y.as_slice().to_vec();
    for &i in split.rest_indices() {
        x[i] = y[i] / (2.0 * lambda + 1.0);
    }
    DenseVector::from_raw(x)
}

/// R = ||x||_2: both blocks are rescaled copies of y.
pub fn prox_l2(s: usize, lambda: f64, y: &DenseVector) -> DenseVector {
    let n = y.len();
    let split = top_s_split(y, s).expect("s must be within 1..=N");
    let ys = truncate_with(y, &split);
    let tail_sq: f64 = split.rest_indices().iter().map(|&i| y[i] * y[i]).sum();
    let ys_norm = ys.norm_l2();
    // y = 0 (Prop: x* = 0 iff y = 0) and s-sparse y (P(y) = 0) are exact
    // fixed points; return them unscaled.
    if ys_norm == 0.0 || tail_sq <= 0.0 {
        return if ys_norm == 0.0 {
            DenseVector::zeros(n)
        } else {
            y.clone()
        };
    }
    let t = (tail_sq + (ys_norm + lambda).powi(2)).sqrt();
    let tail_factor = (t - lambda) / t;
    // (||y^s|| + lambda)(T - lambda) / (||y^s|| T), written to avoid 0/0.
    let top_factor = (1.0 + lambda / ys_norm) * tail_factor;
    let mut x = vec![0.0; n];
    for &i in split.top_indices() {
        x[i] = top_factor * y[i];
    }
    for &i in split.rest_indices() {
        x[i] = tail_factor * y[i];
    }
    DenseVector::from_raw(x)
}

/// R = ||x||_1 - a ||x||_2, 0 <= a <= 1 (a = 0 falls back to the l1 case).
pub fn prox_l1_minus_al2(a: f64, s: usize, lambda: f64, y: &DenseVector) -> Result<DenseVector> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::param(format!("a must lie in [0, 1], got {a}")));
    }
    if a == 0.0 {
        return Ok(prox_l1(s, lambda, y));
    }
    let n = y.len();
    let split = top_s_split(y, s).expect("s must be within 1..=N");
    if s == n {
        // P is identically zero.
        return Ok(y.clone());
    }
    let perm = split.permutation();
    let boundary = y[perm[s]].abs();

    if boundary > lambda {
        // Shrunk tail z; on the top block z is the constant y_{pi(1)}, whose
        // magnitude dominates every shrunk entry, so ||z - z^s|| is just the
        // norm of the shrunk tail.
        let mut x = vec![0.0; n];
        let mut tail_sq = 0.0;
        for &i in split.rest_indices() {
            let zi = shrink(y[i], lambda);
            tail_sq += zi * zi;
            x[i] = zi;
        }
        debug_assert!(y[perm[0]].abs() >= boundary);
        let ys_norm = {
            let mut acc = 0.0;
            for &i in split.top_indices() {
                acc += y[i] * y[i];
            }
            acc.sqrt()
        };
        // ||y^s|| >= |y_{pi(1)}| >= |y_{pi(s+1)}| > lambda >= a lambda, so d > 0.
        let d = (tail_sq + (ys_norm - a * lambda).powi(2)).sqrt();
        let common = 1.0 + a * lambda / d;
        let top_factor = (ys_norm - a * lambda) / ys_norm * common;
        for &i in split.top_indices() {
            x[i] = top_factor * y[i];
        }
        for &i in split.rest_indices() {
            x[i] *= common;
        }
        Ok(DenseVector::from_raw(x))
    } else if boundary == lambda && a == 1.0 && s == 1 && y[perm[0]].abs() == lambda {
        // Infinitely many optima; return the canonical one supported on pi(1).
        let mut x = vec![0.0; n];
        x[perm[0]] = sgn(y[perm[0]]) * lambda;
        Ok(DenseVector::from_raw(x))
    } else {
        // |y_{pi(s+1)}| <= lambda: plain truncation.
        Ok(truncate_with(y, &split))
    }
}

/// R = MCP(theta): firm thresholding off the top block when theta > lambda,
/// hard thresholding at theta when theta <= lambda (the source's stated rule
/// for that regime; it is exact only for theta > lambda).
pub fn prox_mcp(theta: f64, s: usize, lambda: f64, y: &DenseVector) -> DenseVector {
    let split = top_s_split(y, s).expect("s must be within 1..=N");
    let mut x = y.as_slice().to_vec();
    for &i in split.rest_indices() {
        let abs = y[i].abs();
        if abs > theta {
            continue; // keep y_i
        }
        x[i] = if theta > lambda {
            sgn(y[i]) * (theta * (abs - lambda) / (theta - lambda)).max(0.0)
        } else if abs == theta {
            y[i]
        } else {
            0.0
        };
    }
    DenseVector::from_raw(x)
}

/// R = LSP(theta): the off-top scalar problem has at most two interior
/// critical points (roots of a quadratic); the minimizer is picked from
/// {0, xi1+, xi2+} by direct evaluation.
pub fn prox_lsp(theta: f64, s: usize, lambda: f64, y: &DenseVector) -> DenseVector {
    let split = top_s_split(y, s).expect("s must be within 1..=N");
    let mut x = y.as_slice().to_vec();
    for &i in split.rest_indices() {
        x[i] = sgn(y[i]) * lsp_scalar_prox(y[i].abs(), theta, lambda);
    }
    DenseVector::from_raw(x)
}

/// argmin_{t >= 0} (t - b)^2 / (2 lambda) + log(1 + t / theta) for b >= 0.
fn lsp_scalar_prox(b: f64, theta: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return b;
    }
    let objective = |t: f64| (t - b).powi(2) / (2.0 * lambda) + (1.0 + t / theta).ln();
    let disc = (b - theta).powi(2) - 4.0 * (lambda - b * theta);
    let mut best = 0.0;
    let mut best_val = objective(0.0);
    if disc >= 0.0 {
        let root = disc.sqrt();
        for xi in [((b - theta) + root) / 2.0, ((b - theta) - root) / 2.0] {
            let t = xi.max(0.0);
            let val = objective(t);
            // Equal objectives (within 1e-12) keep the smaller magnitude.
            if val < best_val - 1e-12 || (val < best_val + 1e-12 && t < best) {
                best = t;
                best_val = val;
            }
        }
    }
    best
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
