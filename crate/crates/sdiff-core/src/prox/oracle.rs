//! Numerical oracle for the prox objective, independent of the closed forms.
//!
//! Minimizes E(x) = ||x - y||^2 / (2 lambda) + P(x) by multi-start
//! subgradient descent with diminishing steps. Intended for small N (<= 8):
//! with starts at 0, y, every truncation y^{s'} and sign-consistent random
//! perturbations, the descent reliably lands in the global basin, and the
//! best visited point is returned. Tests assert that no closed-form
//! operator is ever beaten by this search.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::vector::{truncate, DenseVector};

use super::ProxProblem;

const ORACLE_SEED: u64 = 0x5d1f_f0ac;
const RANDOM_RESTARTS: usize = 10;
const HALVE_AFTER: usize = 50;

/// Multi-start descent on E(x); `budget` is the step count per start
/// (at least 1000).
pub fn prox_oracle(p: &ProxProblem, budget: usize) -> Result<DenseVector> {
    if budget < 1000 {
        return Err(Error::param(format!(
            "oracle budget must be >= 1000, got {budget}"
        )));
    }
    let n = p.y.len();
    let mut rng = stream_rng(ORACLE_SEED, &[n as u64, p.penalty.s() as u64]);

    let mut starts: Vec<DenseVector> = vec![DenseVector::zeros(n), p.y.clone()];
    for s in 1..=n {
        starts.push(truncate(&p.y, s).expect("s in range"));
    }
    for _ in 0..RANDOM_RESTARTS {
        // Sign-consistent jitter around y (the optimum never flips signs).
        let jitter: Vec<f64> =
            p.y.iter()
                .map(|&yi| {
                    let u: f64 = rng.sample(StandardNormal);
                    let mag = (yi.abs() * (1.0 + 0.5 * u)).abs();
                    if yi >= 0.0 {
                        mag
                    } else {
                        -mag
                    }
                })
                .collect();
        starts.push(DenseVector::new(jitter).unwrap_or_else(|_| p.y.clone()));
    }

    let mut best = DenseVector::zeros(n);
    let mut best_val = p.objective(&best);
    for start in starts {
        let (x, val) = descend(p, start, budget);
        if val < best_val {
            best = x;
            best_val = val;
        }
    }
    Ok(best)
}

/// Subgradient descent with a diminishing step: start at
/// 0.1 * max(1, ||y||_inf), halve after 50 consecutive non-improving steps.
fn descend(p: &ProxProblem, start: DenseVector, budget: usize) -> (DenseVector, f64) {
    let lambda = p.lambda;
    let mut x = start.as_slice().to_vec();
    let mut best = x.clone();
    let mut best_val = p.objective(&start);
    let mut step = 0.1 * p.y.norm_inf().max(1.0);
    let mut stale = 0usize;

    for _ in 0..budget {
        let xv = DenseVector::from_raw(x.clone());
        let pg = p.penalty.subgradient(&xv);
        let mut norm_sq = 0.0;
        let mut g = vec![0.0; x.len()];
        for i in 0..x.len() {
            g[i] = (x[i] - p.y[i]) / lambda + pg[i];
            norm_sq += g[i] * g[i];
        }
        if norm_sq == 0.0 {
            break;
        }
        let scale = step / norm_sq.sqrt();
        for i in 0..x.len() {
            x[i] -= scale * g[i];
        }
        let val = p.objective(&DenseVector::from_raw(x.clone()));
        if val < best_val {
            best_val = val;
            best = x.clone();
            stale = 0;
        } else {
            stale += 1;
            if stale >= HALVE_AFTER {
                step *= 0.5;
                stale = 0;
                // Restart the walk from the incumbent.
                x = best.clone();
                if step < 1e-14 {
                    break;
                }
            }
        }
    }
    (DenseVector::from_raw(best), best_val)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penalty::SDiffPenalty;
    use crate::prox::prox_l1;
    use crate::regularizer::Regularizer;

    fn v(data: &[f64]) -> DenseVector {
        DenseVector::new(data.to_vec()).unwrap()
    }

    #[test]
    fn rejects_small_budget() {
        let p = ProxProblem::new(
            SDiffPenalty::new(Regularizer::L1, 1).unwrap(),
            1.0,
            v(&[1.0, 2.0]),
        )
        .unwrap();
        assert!(prox_oracle(&p, 999).is_err());
    }

    #[test]
    fn zero_anchor_gives_zero() {
        let p = ProxProblem::new(
            SDiffPenalty::new(Regularizer::L1, 1).unwrap(),
            1.0,
            v(&[0.0, 0.0, 0.0]),
        )
        .unwrap();
        let x = prox_oracle(&p, 1000).unwrap();
        assert_eq!(x.as_slice(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn s_equals_n_returns_anchor() {
        let y = v(&[1.5, -0.5]);
        let p = ProxProblem::new(
            SDiffPenalty::new(Regularizer::L1, 2).unwrap(),
            1.0,
            y.clone(),
        )
        .unwrap();
        let x = prox_oracle(&p, 1000).unwrap();
        assert!(x.dist_l2(&y) < 1e-6, "{:?}", x.as_slice());
    }

    #[test]
    fn matches_l1_closed_form_objective() {
        let y = v(&[3.0, -1.0, 0.5]);
        let p = ProxProblem::new(
            SDiffPenalty::new(Regularizer::L1, 1).unwrap(),
            1.0,
            y.clone(),
        )
        .unwrap();
        let oracle = prox_oracle(&p, 2000).unwrap();
        let closed = prox_l1(1, 1.0, &y);
        let (eo, ec) = (p.objective(&oracle), p.objective(&closed));
        assert!(
            ec <= eo + 1e-6 * eo.abs().max(1.0),
            "closed {ec} oracle {eo}"
        );
        assert!(
            (eo - ec).abs() < 1e-6 * ec.max(1.0),
            "closed {ec} oracle {eo}"
        );
    }
}
