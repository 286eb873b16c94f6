//! s-difference sparse regularization: P(x) = R(x) - R(x^s).
//!
//! The penalty vanishes exactly on s-sparse vectors, which makes it an exact
//! surrogate for the cardinality constraint ||x||_0 <= s. This crate
//! provides:
//!
//! - the base regularizers R, the penalty P and its convex split P1 - P2
//!   ([`penalty`], [`regularizer`]),
//! - closed-form proximal operators of lambda * P plus an independent
//!   numerical oracle ([`prox`]),
//! - forward-backward splitting, proximal DCA, DCA with inner ADMM, and the
//!   baseline solvers used for comparison ([`solvers`]),
//! - sensing-matrix and sparse-signal generators ([`sensing`]),
//! - a seeded benchmark harness that reproduces the reference experiments
//!   at desk scale ([`bench`]).

pub mod bench;
pub mod error;
pub mod penalty;
pub mod problem;
pub mod prox;
pub mod regularizer;
pub mod rng;
pub mod sensing;
pub mod solvers;
pub mod vector;

pub use error::{Error, Result};
pub use penalty::SDiffPenalty;
pub use problem::LeastSquaresProblem;
pub use prox::{prox_oracle, prox_sdiff, shrink, ProxProblem};
pub use regularizer::Regularizer;
pub use sensing::{
    gen_gaussian, gen_partial_dct, gen_sparse_signal, spectral_norm_sq, MatrixKind, SensingMatrix,
};
pub use solvers::{SolveTrace, SolverConfig};
pub use vector::{top_s_split, truncate, DenseVector, TopSSplit};
