//! Base penalties R(x).
//!
//! Every kind is symmetric (R(x) = R(-x)), vanishes at the origin and is
//! nonnegative, which is what the s-difference construction needs from its
//! base penalty. Separable kinds apply a scalar function coordinatewise;
//! the `*OfL2` kinds apply the same scalar shapes to ||x||_2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::DenseVector;

/// Base penalty R(x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularizer {
    /// ||x||_1
    L1,
    /// ||x||_2^2
    L2Squared,
    /// ||x||_2
    L2,
    /// ||x||_1 - a ||x||_2 with 0 < a <= 1 (a = 0 is admitted as the plain l1 limit).
    L1MinusL2 { a: f64 },
    /// Log-sum penalty: sum_i log(1 + |x_i| / theta), theta > 0.
    Lsp { theta: f64 },
    /// Minimax-concave penalty, theta > 0:
    /// r(t) = |t| - t^2/(2 theta) for |t| <= theta, theta/2 otherwise.
    Mcp { theta: f64 },
    /// Smoothly clipped absolute deviation with knots at 1 and theta, theta > 2.
    Scad { theta: f64 },
    /// Huber function of ||x||_2, theta > 0.
    HuberOfL2 { theta: f64 },
    /// log(1 + ||x||_2 / theta), theta > 0.
    LogOfL2 { theta: f64 },
    /// MCP shape applied to ||x||_2, theta > 0.
    McpOfL2 { theta: f64 },
    /// theta1 ||x||_1 - sum_i log(1 + |x_i| / theta2), theta1 > theta2 > 0.
    LspWeighted { theta1: f64, theta2: f64 },
}

impl Regularizer {
    /// Checks the parameter ranges.
    pub fn validate(&self) -> Result<()> {
        use Regularizer::*;
        let ok = match *self {
            L1 | L2Squared | L2 => true,
            L1MinusL2 { a } => (0.0..=1.0).contains(&a),
            Lsp { theta }
            | Mcp { theta }
            | HuberOfL2 { theta }
            | LogOfL2 { theta }
            | McpOfL2 { theta } => theta > 0.0 && theta.is_finite(),
            Scad { theta } => theta > 2.0 && theta.is_finite(),
            LspWeighted { theta1, theta2 } => theta1 > theta2 && theta2 > 0.0 && theta1.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param(format!(
                "regularizer parameter out of range: {self:?}"
            )))
        }
    }

    /// True when R is a coordinatewise sum of a scalar function.
    pub fn is_separable(&self) -> bool {
        use Regularizer::*;
        matches!(
            self,
            L1 | L2Squared | Lsp { .. } | Mcp { .. } | Scad { .. } | LspWeighted { .. }
        )
    }

    /// True when the s-difference penalty built on R has a closed-form
    /// proximal map in this crate.
    pub fn has_closed_form_prox(&self) -> bool {
        use Regularizer::*;
        matches!(
            self,
            L1 | L2Squared | L2 | L1MinusL2 { .. } | Lsp { .. } | Mcp { .. }
        )
    }

    /// Scalar summand for separable kinds.
    ///
    /// Panics for non-separable kinds; callers gate on `is_separable`.
    pub fn scalar_eval(&self, t: f64) -> f64 {
        use Regularizer::*;
        let a = t.abs();
        match *self {
            L1 => a,
            L2Squared => t * t,
            Lsp { theta } => (1.0 + a / theta).ln(),
            Mcp { theta } => {
                if a <= theta {
                    a - t * t / (2.0 * theta)
                } else {
                    theta / 2.0
                }
            }
            Scad { theta } => {
                if a < 1.0 {
                    a
                } else if a < theta {
                    (2.0 * theta * a - t * t - 1.0) / (2.0 * (theta - 1.0))
                } else {
                    (theta + 1.0) / 2.0
                }
            }
            LspWeighted { theta1, theta2 } => theta1 * a - (1.0 + a / theta2).ln(),
            _ => panic!("scalar_eval on non-separable regularizer {self:?}"),
        }
    }

    /// R(x).
    pub fn eval(&self, x: &DenseVector) -> f64 {
        use Regularizer::*;
        match *self {
            L1 => x.norm_l1(),
            L2Squared => x.norm_l2_sq(),
            L2 => x.norm_l2(),
            L1MinusL2 { a } => x.norm_l1() - a * x.norm_l2(),
            Lsp { .. } | Mcp { .. } | Scad { .. } | LspWeighted { .. } => {
                x.iter().map(|&t| self.scalar_eval(t)).sum()
            }
            HuberOfL2 { theta } => huber(x.norm_l2(), theta),
            LogOfL2 { theta } => (1.0 + x.norm_l2() / theta).ln(),
            McpOfL2 { theta } => mcp_scalar(x.norm_l2(), theta),
        }
    }

    /// One element of the subdifferential of R at x (the zero subgradient is
    /// chosen at kinks). Used by the numerical prox oracle.
    pub(crate) fn subgradient(&self, x: &DenseVector) -> Vec<f64> {
        use Regularizer::*;
        let n = x.len();
        match *self {
            L1 => x.iter().map(|&t| sgn(t)).collect(),
            L2Squared => x.iter().map(|&t| 2.0 * t).collect(),
            L2 => radial(x, 1.0),
            L1MinusL2 { a } => {
                let rad = radial(x, a);
                x.iter().zip(rad).map(|(&t, r)| sgn(t) - r).collect()
            }
            Lsp { theta } => x.iter().map(|&t| sgn(t) / (theta + t.abs())).collect(),
            Mcp { theta } => x
                .iter()
                .map(|&t| {
                    if t.abs() <= theta {
                        sgn(t) - t / theta
                    } else {
                        0.0
                    }
                })
                .collect(),
            Scad { theta } => x
                .iter()
                .map(|&t| {
                    let a = t.abs();
                    if a < 1.0 {
                        sgn(t)
                    } else if a < theta {
                        sgn(t) * (theta - a) / (theta - 1.0)
                    } else {
                        0.0
                    }
                })
                .collect(),
            LspWeighted { theta1, theta2 } => x
                .iter()
                .map(|&t| sgn(t) * (theta1 - 1.0 / (theta2 + t.abs())))
                .collect(),
            HuberOfL2 { theta } => {
                let norm = x.norm_l2();
                if norm == 0.0 {
                    vec![0.0; n]
                } else {
                    let f = if norm <= theta {
                        1.0 / theta
                    } else {
                        1.0 / norm
                    };
                    x.iter().map(|&t| f * t).collect()
                }
            }
            LogOfL2 { theta } => {
                let norm = x.norm_l2();
                if norm == 0.0 {
                    vec![0.0; n]
                } else {
                    x.iter().map(|&t| t / (norm * (theta + norm))).collect()
                }
            }
            McpOfL2 { theta } => {
                let norm = x.norm_l2();
                if norm == 0.0 {
                    vec![0.0; n]
                } else if norm <= theta {
                    x.iter().map(|&t| t * (1.0 / norm - 1.0 / theta)).collect()
                } else {
                    vec![0.0; n]
                }
            }
        }
    }
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

/// c * x / ||x||_2, or zero at the origin.
fn radial(x: &DenseVector, c: f64) -> Vec<f64> {
    let norm = x.norm_l2();
    if norm == 0.0 {
        vec![0.0; x.len()]
    } else {
        x.iter().map(|&t| c * t / norm).collect()
    }
}

pub(crate) fn huber(t: f64, theta: f64) -> f64 {
    if t <= theta {
        t * t / (2.0 * theta)
    } else {
        t - theta / 2.0
    }
}

pub(crate) fn mcp_scalar(t: f64, theta: f64) -> f64 {
    if t <= theta {
        t - t * t / (2.0 * theta)
    } else {
        theta / 2.0
    }
}
