//! `sdiff prox-check`: closed forms versus the numerical oracle.

use std::process::ExitCode;

use rand::Rng;
use sdiff_core::error::{Error, Result};
use sdiff_core::prox::{
    prox_l1, prox_l1_minus_al2, prox_l2, prox_l2sq, prox_lsp, prox_mcp, prox_oracle,
};
use sdiff_core::rng::stream_rng;
use sdiff_core::{DenseVector, ProxProblem, Regularizer, SDiffPenalty};

const GAP_TOLERANCE: f64 = 1e-6;

pub fn run(
    dims: usize,
    trials: usize,
    seed: u64,
    inject_fault: bool,
    quiet: bool,
) -> Result<ExitCode> {
    if !(1..=8).contains(&dims) {
        return Err(Error::InvalidParameter(format!(
            "dims must lie in 1..=8, got {dims}"
        )));
    }
    if trials < 1 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let mut rng = stream_rng(seed, &[]);
    let operators = ["l1", "l2sq", "l2", "l1_minus_al2", "mcp", "lsp"];
    let mut all_ok = true;

    for op in operators {
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let n = if dims == 1 {
                1
            } else {
                rng.random_range(2..=dims)
            };
            let s = rng.random_range(1..=n);
            let lambda = rng.random_range(0.01..=2.0);
            let y = DenseVector::new(
                (0..n)
                    .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal) * 2.0)
                    .collect(),
            )
            .unwrap();
            let (reg, mut x) = match op {
                "l1" => (Regularizer::L1, prox_l1(s, lambda, &y)),
                "l2sq" => (Regularizer::L2Squared, prox_l2sq(s, lambda, &y)),
                "l2" => (Regularizer::L2, prox_l2(s, lambda, &y)),
                "l1_minus_al2" => {
                    let a = rng.random_range(0.05..=1.0);
                    (
                        Regularizer::L1MinusL2 { a },
                        prox_l1_minus_al2(a, s, lambda, &y)?,
                    )
                }
                "mcp" => {
                    let theta = lambda + rng.random_range(0.05..2.0);
                    (Regularizer::Mcp { theta }, prox_mcp(theta, s, lambda, &y))
                }
                "lsp" => {
                    let theta = rng.random_range(0.1..2.0);
                    (Regularizer::Lsp { theta }, prox_lsp(theta, s, lambda, &y))
                }
                _ => unreachable!(),
            };
            if inject_fault && op == "l1" {
                let mut broken = x.as_slice().to_vec();
                broken[0] += 0.5;
                x = DenseVector::new(broken).unwrap();
            }
            let problem = ProxProblem::new(SDiffPenalty::new(reg, s)?, lambda, y)?;
            let oracle = prox_oracle(&problem, 1500)?;
            let gap = problem.objective(&x) - problem.objective(&oracle);
            worst = worst.max(gap);
        }
        let ok = worst <= GAP_TOLERANCE;
        all_ok &= ok;
        if !quiet {
            println!(
                "{op:<14} max objective gap {worst:>12.3e}  {}",
                if ok { "ok" } else { "FAIL" }
            );
        }
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
