//! Exact-penalty thresholds: values of rho above which the minimizer of the
//! penalized problem solves the s-sparse constrained one.
//!
//! Two families: a Lipschitz loss (threshold beta_loss / eta, where eta
//! lower-bounds the penalty's response to removing the (s+1)-th entry) and a
//! loss with Lipschitz gradient on a bounded solution set (threshold built
//! from ||grad phi(0)||, L and the radius C). For least squares those
//! specialize to ||A^T b||_2 and ||A||_2^2. The eta values are 1 for l1,
//! 1 - a/(2 sqrt(s)) for l1 - a*l2, and theta1 - theta2 for the weighted
//! log-sum penalty.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundKind {
    /// Lipschitz loss with constant beta_loss, generic eta.
    LipschitzLoss { beta_loss: f64, eta: f64 },
    /// Lipschitz loss, R = l1 (eta = 1).
    LipschitzLossL1 { beta_loss: f64 },
    /// Lipschitz loss, R = l1 - a*l2.
    LipschitzLossL1L2 { beta_loss: f64, a: f64, s: usize },
    /// Lipschitz loss, R = theta1 l1 - log-sum(theta2).
    LipschitzLossLsp {
        beta_loss: f64,
        theta1: f64,
        theta2: f64,
    },
    /// Lipschitz-gradient loss on a ball of radius c, generic eta.
    GradientLipschitz {
        grad0_norm: f64,
        lipschitz: f64,
        c: f64,
        eta: f64,
        s: usize,
    },
    /// Least squares, R = l1.
    LeastSquaresL1 {
        atb_norm: f64,
        a_norm_sq: f64,
        c: f64,
        s: usize,
    },
    /// Least squares, R = l1 - a*l2.
    LeastSquaresL1L2 {
        atb_norm: f64,
        a_norm_sq: f64,
        c: f64,
        s: usize,
        a: f64,
    },
    /// Least squares, R = theta1 l1 - log-sum(theta2).
    LeastSquaresLsp {
        atb_norm: f64,
        a_norm_sq: f64,
        c: f64,
        s: usize,
        theta1: f64,
        theta2: f64,
    },
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::param(what.to_string()))
    }
}

fn positive(v: f64, name: &str) -> Result<()> {
    require(
        v > 0.0 && v.is_finite(),
        &format!("{name} must be positive and finite"),
    )
}

fn eta_l1l2(a: f64, s: usize) -> Result<f64> {
    require(a > 0.0 && a <= 1.0, "a must lie in (0, 1]")?;
    require(s >= 1, "s must be >= 1")?;
    Ok(1.0 - a / (2.0 * (s as f64).sqrt()))
}

fn eta_lsp(theta1: f64, theta2: f64) -> Result<f64> {
    require(theta1 > theta2 && theta2 > 0.0, "need theta1 > theta2 > 0")?;
    Ok(theta1 - theta2)
}

/// The gradient-Lipschitz threshold (1/eta)(||grad phi(0)|| + (1 + 1/(2 sqrt(s+1))) L C).
fn gradient_bound(grad0: f64, lipschitz: f64, c: f64, eta: f64, s: usize) -> f64 {
    (grad0 + (1.0 + 0.5 / ((s as f64 + 1.0).sqrt())) * lipschitz * c) / eta
}

/// Threshold rho-bar such that rho > rho-bar makes the penalized optimum
/// solve the constrained problem.
pub fn rho_lower_bound(kind: &BoundKind) -> Result<f64> {
    use BoundKind::*;
    match *kind {
        LipschitzLoss { beta_loss, eta } => {
            positive(beta_loss, "beta_loss")?;
            positive(eta, "eta")?;
            Ok(beta_loss / eta)
        }
        LipschitzLossL1 { beta_loss } => {
            positive(beta_loss, "beta_loss")?;
            Ok(beta_loss)
        }
        LipschitzLossL1L2 { beta_loss, a, s } => {
            positive(beta_loss, "beta_loss")?;
            Ok(beta_loss / eta_l1l2(a, s)?)
        }
        LipschitzLossLsp {
            beta_loss,
            theta1,
            theta2,
        } => {
            positive(beta_loss, "beta_loss")?;
            Ok(beta_loss / eta_lsp(theta1, theta2)?)
        }
        GradientLipschitz {
            grad0_norm,
            lipschitz,
            c,
            eta,
            s,
        } => {
            require(grad0_norm >= 0.0, "grad0_norm must be nonnegative")?;
            positive(lipschitz, "lipschitz")?;
            positive(c, "c")?;
            positive(eta, "eta")?;
            require(s >= 1, "s must be >= 1")?;
            Ok(gradient_bound(grad0_norm, lipschitz, c, eta, s))
        }
        LeastSquaresL1 {
            atb_norm,
            a_norm_sq,
            c,
            s,
        } => {
            require(atb_norm >= 0.0, "atb_norm must be nonnegative")?;
            positive(a_norm_sq, "a_norm_sq")?;
            positive(c, "c")?;
            require(s >= 1, "s must be >= 1")?;
            Ok(gradient_bound(atb_norm, a_norm_sq, c, 1.0, s))
        }
        LeastSquaresL1L2 {
            atb_norm,
            a_norm_sq,
            c,
            s,
            a,
        } => {
            require(atb_norm >= 0.0, "atb_norm must be nonnegative")?;
            positive(a_norm_sq, "a_norm_sq")?;
            positive(c, "c")?;
            Ok(gradient_bound(atb_norm, a_norm_sq, c, eta_l1l2(a, s)?, s))
        }
        LeastSquaresLsp {
            atb_norm,
            a_norm_sq,
            c,
            s,
            theta1,
            theta2,
        } => {
            require(atb_norm >= 0.0, "atb_norm must be nonnegative")?;
            positive(a_norm_sq, "a_norm_sq")?;
            positive(c, "c")?;
            require(s >= 1, "s must be >= 1")?;
            Ok(gradient_bound(
                atb_norm,
                a_norm_sq,
                c,
                eta_lsp(theta1, theta2)?,
                s,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_threshold_is_beta() {
        let b = rho_lower_bound(&BoundKind::LipschitzLossL1 { beta_loss: 2.0 }).unwrap();
        assert_eq!(b, 2.0);
    }

    #[test]
    fn least_squares_l1_example() {
        let b = rho_lower_bound(&BoundKind::LeastSquaresL1 {
            atb_norm: 1.0,
            a_norm_sq: 1.0,
            c: 1.0,
            s: 1,
        })
        .unwrap();
        // 1 + (1 + 1/(2 sqrt 2)) = 2.353553...
        assert!((b - 2.353553).abs() < 1e-6, "{b}");
    }

    #[test]
    fn l1l2_eta_example() {
        let b = rho_lower_bound(&BoundKind::LipschitzLossL1L2 {
            beta_loss: 1.0,
            a: 1.0,
            s: 4,
        })
        .unwrap();
        assert!((b - 4.0 / 3.0).abs() < 1e-12, "{b}");
    }

    #[test]
    fn parameter_violations_error() {
        assert!(rho_lower_bound(&BoundKind::LipschitzLossL1 { beta_loss: 0.0 }).is_err());
        assert!(rho_lower_bound(&BoundKind::LipschitzLossL1L2 {
            beta_loss: 1.0,
            a: 1.5,
            s: 4
        })
        .is_err());
        assert!(rho_lower_bound(&BoundKind::LipschitzLossLsp {
            beta_loss: 1.0,
            theta1: 0.5,
            theta2: 0.5
        })
        .is_err());
    }

    #[test]
    fn lsp_weighted_threshold() {
        let b = rho_lower_bound(&BoundKind::LipschitzLossLsp {
            beta_loss: 3.0,
            theta1: 2.0,
            theta2: 0.5,
        })
        .unwrap();
        assert!((b - 2.0).abs() < 1e-12);
    }
}
