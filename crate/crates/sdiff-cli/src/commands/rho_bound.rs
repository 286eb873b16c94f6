//! `sdiff rho-bound`: exact-penalty thresholds from the penalty-family
//! analysis. rho strictly above the printed value makes the penalized
//! optimum solve the s-sparse constrained problem.

use std::process::ExitCode;

use clap::Subcommand;

use sdiff_core::error::Result;
use sdiff_core::solvers::{rho_lower_bound, BoundKind};

#[derive(Subcommand)]
pub enum BoundCommand {
    /// Lipschitz loss, R = l1: threshold beta.
    L1 {
        #[arg(long)]
        beta: f64,
    },
    /// Lipschitz loss, R = l1 - a*l2: beta / (1 - a/(2 sqrt(s))).
    L1l2 {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        s: usize,
    },
    /// Lipschitz loss, R = theta1*l1 - logsum(theta2): beta / (theta1 - theta2).
    Lsp {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        theta1: f64,
        #[arg(long)]
        theta2: f64,
    },
    /// Lipschitz loss with an explicit penalty response constant eta.
    Generic {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        eta: f64,
    },
    /// Lipschitz-gradient loss on a ball of radius c.
    Grad {
        #[arg(long)]
        grad0: f64,
        #[arg(long)]
        lipschitz: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        s: usize,
    },
    /// Least squares, R = l1.
    LsL1 {
        /// ||A^T b||_2
        #[arg(long)]
        atb: f64,
        /// ||A||_2^2
        #[arg(long)]
        a2: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        s: usize,
    },
    /// Least squares, R = l1 - a*l2.
    LsL1l2 {
        #[arg(long)]
        atb: f64,
        #[arg(long)]
        a2: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        a: f64,
    },
    /// Least squares, R = theta1*l1 - logsum(theta2).
    LsLsp {
        #[arg(long)]
        atb: f64,
        #[arg(long)]
        a2: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        theta1: f64,
        #[arg(long)]
        theta2: f64,
    },
}

impl BoundCommand {
    fn to_kind(&self) -> (BoundKind, &'static str) {
        match *self {
            BoundCommand::L1 { beta } => (
                BoundKind::LipschitzLossL1 { beta_loss: beta },
                "lipschitz-loss l1",
            ),
            BoundCommand::L1l2 { beta, a, s } => (
                BoundKind::LipschitzLossL1L2 {
                    beta_loss: beta,
                    a,
                    s,
                },
                "lipschitz-loss l1-a*l2",
            ),
            BoundCommand::Lsp {
                beta,
                theta1,
                theta2,
            } => (
                BoundKind::LipschitzLossLsp {
                    beta_loss: beta,
                    theta1,
                    theta2,
                },
                "lipschitz-loss weighted-lsp",
            ),
            BoundCommand::Generic { beta, eta } => (
                BoundKind::LipschitzLoss {
                    beta_loss: beta,
                    eta,
                },
                "lipschitz-loss generic",
            ),
            BoundCommand::Grad {
                grad0,
                lipschitz,
                c,
                eta,
                s,
            } => (
                BoundKind::GradientLipschitz {
                    grad0_norm: grad0,
                    lipschitz,
                    c,
                    eta,
                    s,
                },
                "gradient-lipschitz",
            ),
            BoundCommand::LsL1 { atb, a2, c, s } => (
                BoundKind::LeastSquaresL1 {
                    atb_norm: atb,
                    a_norm_sq: a2,
                    c,
                    s,
                },
                "least-squares l1",
            ),
            BoundCommand::LsL1l2 { atb, a2, c, s, a } => (
                BoundKind::LeastSquaresL1L2 {
                    atb_norm: atb,
                    a_norm_sq: a2,
                    c,
                    s,
                    a,
                },
                "least-squares l1-a*l2",
            ),
            BoundCommand::LsLsp {
                atb,
                a2,
                c,
                s,
                theta1,
                theta2,
            } => (
                BoundKind::LeastSquaresLsp {
                    atb_norm: atb,
                    a_norm_sq: a2,
                    c,
                    s,
                    theta1,
                    theta2,
                },
                "least-squares weighted-lsp",
            ),
        }
    }
}

pub fn run(cmd: BoundCommand) -> Result<ExitCode> {
    let (kind, label) = cmd.to_kind();
    let bound = rho_lower_bound(&kind)?;
    println!("rho_bound ({label}): {bound:.6}");
    Ok(ExitCode::SUCCESS)
}
