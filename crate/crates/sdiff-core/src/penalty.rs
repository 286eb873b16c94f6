//! The s-difference penalty P(x) = R(x) - R(x^s) and its DC split P1 - P2.
//!
//! P vanishes exactly on the s-sparse vectors and is positive elsewhere, so
//! weighting it by a large enough rho turns the cardinality constraint
//! ||x||_0 <= s into an unconstrained objective. Both P1 and P2 are convex;
//! the truncated composites R(x^s) are convex because they are pointwise
//! maxima of R over coordinate selections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regularizer::{huber, mcp_scalar, Regularizer};
use crate::vector::{top_s_split, truncate_with, DenseVector};

/// A base regularizer together with the sparsity level s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SDiffPenalty {
    reg: Regularizer,
    s: usize,
}

impl SDiffPenalty {
    pub fn new(reg: Regularizer, s: usize) -> Result<Self> {
        reg.validate()?;
        if s < 1 {
            return Err(Error::param("sparsity level s must be >= 1"));
        }
        Ok(Self { reg, s })
    }

    pub fn regularizer(&self) -> Regularizer {
        self.reg
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Same regularizer, different sparsity level (adaptive-s updates).
    pub fn with_s(&self, s: usize) -> Self {
        Self {
            reg: self.reg,
            s: s.max(1),
        }
    }

    pub fn validate_dim(&self, n: usize) -> Result<()> {
        if self.s > n {
            return Err(Error::param(format!(
                "sparsity level s={} exceeds dimension N={n}",
                self.s
            )));
        }
        Ok(())
    }

    /// P(x) = R(x) - R(x^s).
    ///
    /// Exactly zero (bit-level) when ||x||_0 <= s, because the truncation is
    /// then the identity. Panics if s > x.len().
    pub fn eval(&self, x: &DenseVector) -> f64 {
        let split = top_s_split(x, self.s).expect("s must be within 1..=N");
        let xs = truncate_with(x, &split);
        self.reg.eval(x) - self.reg.eval(&xs)
    }

    /// The convex pair (P1(x), P2(x)) with P1 - P2 = P.
    ///
    /// Follows the tabulated decompositions for each base penalty; SCAD and
    /// the weighted log-sum use the same pattern as MCP/LSP (slope-matched
    /// l1 term plus a convex residual).
    pub fn dc_parts(&self, x: &DenseVector) -> (f64, f64) {
        use Regularizer::*;
        let split = top_s_split(x, self.s).expect("s must be within 1..=N");
        let xs = truncate_with(x, &split);
        let r = self.reg;
        match r {
            L1 => (x.norm_l1(), xs.norm_l1()),
            L2Squared => (x.norm_l2_sq(), xs.norm_l2_sq()),
            L2 => (x.norm_l2(), xs.norm_l2()),
            HuberOfL2 { theta } => (huber(x.norm_l2(), theta), huber(xs.norm_l2(), theta)),
            Lsp { theta } => {
                let (lx, lxs) = (r.eval(x), r.eval(&xs));
                (
                    x.norm_l1() / theta + (xs.norm_l1() / theta - lxs),
                    xs.norm_l1() / theta + (x.norm_l1() / theta - lx),
                )
            }
            Mcp { .. } | Scad { .. } => {
                let (rx, rxs) = (r.eval(x), r.eval(&xs));
                (
                    x.norm_l1() + (xs.norm_l1() - rxs),
                    xs.norm_l1() + (x.norm_l1() - rx),
                )
            }
            L1MinusL2 { a } => (
                x.norm_l1() + a * xs.norm_l2(),
                xs.norm_l1() + a * x.norm_l2(),
            ),
            LogOfL2 { theta } => {
                let (rx, rxs) = (r.eval(x), r.eval(&xs));
                (
                    x.norm_l2() / theta + (xs.norm_l2() / theta - rxs),
                    xs.norm_l2() / theta + (x.norm_l2() / theta - rx),
                )
            }
            McpOfL2 { theta } => {
                let (rx, rxs) = (
                    mcp_scalar(x.norm_l2(), theta),
                    mcp_scalar(xs.norm_l2(), theta),
                );
                (
                    x.norm_l2() + (xs.norm_l2() - rxs),
                    xs.norm_l2() + (x.norm_l2() - rx),
                )
            }
            LspWeighted { theta1, theta2 } => {
                let lsp = Lsp { theta: theta2 };
                let (lx, lxs) = (lsp.eval(x), lsp.eval(&xs));
                (
                    theta1 * x.norm_l1() + (x.norm_l1() / theta2 - lx) + xs.norm_l1() / theta2,
                    theta1 * xs.norm_l1() + (xs.norm_l1() / theta2 - lxs) + x.norm_l1() / theta2,
                )
            }
        }
    }

    /// One element of the subdifferential of P2 at x.
    ///
    /// At differentiable points this is the gradient; at |x_i| = 0 the zero
    /// subgradient of |.| is chosen, and on top-s boundaries the canonical
    /// tie-broken split decides which coordinates belong to x^s.
    pub fn p2_subgradient(&self, x: &DenseVector) -> DenseVector {
        use Regularizer::*;
        let n = x.len();
        let split = top_s_split(x, self.s).expect("s must be within 1..=N");
        let xs = truncate_with(x, &split);
        let mask = split.top_mask();
        let mut w = vec![0.0; n];
        match self.reg {
            L1 => {
                for &i in split.top_indices() {
                    w[i] = sgn(x[i]);
                }
            }
            L2Squared => {
                for &i in split.top_indices() {
                    w[i] = 2.0 * x[i];
                }
            }
            L2 => {
                let norm = xs.norm_l2();
                if norm > 0.0 {
                    for &i in split.top_indices() {
                        w[i] = x[i] / norm;
                    }
                }
            }
            HuberOfL2 { theta } => {
                let norm = xs.norm_l2();
                if norm > 0.0 {
                    let f = (1.0 / theta).min(1.0 / norm);
                    for &i in split.top_indices() {
                        w[i] = f * x[i];
                    }
                }
            }
            Lsp { theta } => {
                // P2 = ||x^s||_1/theta + (||x||_1/theta - R(x))
                for i in 0..n {
                    let top = if mask[i] { sgn(x[i]) / theta } else { 0.0 };
                    let resid = sgn(x[i]) * (1.0 / theta - 1.0 / (theta + x[i].abs()));
                    w[i] = top + resid;
                }
            }
            Mcp { theta } => {
                for i in 0..n {
                    let top = if mask[i] { sgn(x[i]) } else { 0.0 };
                    let t = x[i];
                    let resid = if t.abs() <= theta { t / theta } else { sgn(t) };
                    w[i] = top + resid;
                }
            }
            Scad { theta } => {
                for i in 0..n {
                    let top = if mask[i] { sgn(x[i]) } else { 0.0 };
                    let a = x[i].abs();
                    let resid = if a < 1.0 {
                        0.0
                    } else if a < theta {
                        sgn(x[i]) * (a - 1.0) / (theta - 1.0)
                    } else {
                        sgn(x[i])
                    };
                    w[i] = top + resid;
                }
            }
            L1MinusL2 { a } => {
                let norm = x.norm_l2();
                for i in 0..n {
                    let top = if mask[i] { sgn(x[i]) } else { 0.0 };
                    let rad = if norm > 0.0 { a * x[i] / norm } else { 0.0 };
                    w[i] = top + rad;
                }
            }
            LogOfL2 { theta } => {
                let ns = xs.norm_l2();
                let nx = x.norm_l2();
                for i in 0..n {
                    let top = if mask[i] && ns > 0.0 {
                        x[i] / (theta * ns)
                    } else {
                        0.0
                    };
                    let resid = if nx > 0.0 {
                        x[i] / (theta * (theta + nx))
                    } else {
                        0.0
                    };
                    w[i] = top + resid;
                }
            }
            McpOfL2 { theta } => {
                let ns = xs.norm_l2();
                let nx = x.norm_l2();
                for i in 0..n {
                    let top = if mask[i] && ns > 0.0 { x[i] / ns } else { 0.0 };
                    let resid = if nx > 0.0 {
                        x[i] * (1.0 / theta).min(1.0 / nx)
                    } else {
                        0.0
                    };
                    w[i] = top + resid;
                }
            }
            LspWeighted { theta1, theta2 } => {
                for i in 0..n {
                    let top = if mask[i] {
                        sgn(x[i]) * (theta1 + 1.0 / theta2 - 1.0 / (theta2 + x[i].abs()))
                    } else {
                        0.0
                    };
                    w[i] = top + sgn(x[i]) / theta2;
                }
            }
        }
        DenseVector::from_raw(w)
    }

    /// One element of the subdifferential of P = P1 - P2 at x, as the
    /// difference of a subgradient of R and one of R(.^s). Used by the
    /// numerical prox oracle.
    pub(crate) fn subgradient(&self, x: &DenseVector) -> Vec<f64> {
        let split = top_s_split(x, self.s).expect("s must be within 1..=N");
        let xs = truncate_with(x, &split);
        let g = self.reg.subgradient(x);
        let gs = self.reg.subgradient(&xs);
        let mask = split.top_mask();
        g.iter()
            .zip(gs)
            .enumerate()
            .map(|(i, (gi, gsi))| gi - if mask[i] { gsi } else { 0.0 })
            .collect()
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

#[cfg(test)]
mod tests {
    use super::*;

    fn v(data: &[f64]) -> DenseVector {
        DenseVector::new(data.to_vec()).unwrap()
    }

    fn pen(reg: Regularizer, s: usize) -> SDiffPenalty {
        SDiffPenalty::new(reg, s).unwrap()
    }

    #[test]
    fn l1_penalty_is_bottom_tail_sum() {
        let p = pen(Regularizer::L1, 2);
        assert_eq!(p.eval(&v(&[3.0, -2.0, 1.0])), 1.0);
        assert_eq!(p.eval(&v(&[3.0, 0.0, -2.0])), 0.0);
    }

    #[test]
    fn penalty_zero_iff_sparse_is_exact() {
        let p = pen(Regularizer::L1MinusL2 { a: 1.0 }, 1);
        // (7 - 5) - (4 - 4) = 2
        assert!((p.eval(&v(&[3.0, 4.0, 0.0])) - 2.0).abs() < 1e-15);
        assert_eq!(p.eval(&v(&[0.0, 4.0, 0.0])), 0.0);
    }

    #[test]
    fn dc_parts_l1() {
        let p = pen(Regularizer::L1, 1);
        let (p1, p2) = p.dc_parts(&v(&[3.0, -2.0]));
        assert_eq!((p1, p2), (5.0, 3.0));
    }

    #[test]
    fn dc_parts_l1_minus_l2() {
        let p = pen(Regularizer::L1MinusL2 { a: 1.0 }, 1);
        let (p1, p2) = p.dc_parts(&v(&[3.0, 4.0, 0.0]));
        assert!((p1 - 11.0).abs() < 1e-12);
        assert!((p2 - 9.0).abs() < 1e-12);
        assert!((p1 - p2 - p.eval(&v(&[3.0, 4.0, 0.0]))).abs() < 1e-12);
    }

    #[test]
    fn dc_parts_zero_vector() {
        let p = pen(Regularizer::Lsp { theta: 1.0 }, 1);
        assert_eq!(p.dc_parts(&v(&[0.0, 0.0])), (0.0, 0.0));
    }

    #[test]
    fn p2_subgradient_l1() {
        let p = pen(Regularizer::L1, 1);
        assert_eq!(p.p2_subgradient(&v(&[3.0, -2.0])).as_slice(), &[1.0, 0.0]);
        assert_eq!(p.p2_subgradient(&v(&[0.0, 0.0])).as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn p2_subgradient_l1_minus_l2() {
        let p = pen(Regularizer::L1MinusL2 { a: 1.0 }, 1);
        let w = p.p2_subgradient(&v(&[3.0, 4.0, 0.0]));
        assert!((w[0] - 0.6).abs() < 1e-12);
        assert!((w[1] - 1.8).abs() < 1e-12);
        assert_eq!(w[2], 0.0);
    }
}
