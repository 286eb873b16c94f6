//! Seeded experiment harness: success-rate sweeps, recovery-error tables,
//! solver comparisons and the sparsity-sensitivity study.
//!
//! Every trial derives its own PRNG streams from (master seed, trial index),
//! so trials are order-independent and may run in parallel; aggregation
//! happens after a sort by trial index. Wall time is measured only when
//! `record_wall_time` is set, keeping the default artifacts byte-identical
//! across reruns.

pub mod io;
pub mod presets;
pub mod toy;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::penalty::SDiffPenalty;
use crate::problem::LeastSquaresProblem;
use crate::regularizer::Regularizer;
use crate::rng::{derive_seed, labels, stream_rng};
use crate::sensing::{gen_gaussian, gen_partial_dct, gen_sparse_signal, MatrixKind};
use crate::solvers::{
    aiht_solve, dca_admm_solve, fbs_solve, half_threshold_solve, l12_dca_solve, l1_admm_solve,
    l1_admm_trace, pdca_solve, AdmmConfig, Init, SolveTrace, SolverConfig,
};
use crate::vector::DenseVector;

/// Shared initialization for every solver in a trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitSpec {
    Zeros,
    /// l1-ADMM warm start (`iters` defaults to N).
    L1Admm {
        rho: f64,
        iters: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    SdiffFbs { reg: Regularizer },
    SdiffPdca { reg: Regularizer },
    SdiffDcaAdmm { reg: Regularizer },
    L1Admm,
    Aiht,
    HalfThresholding,
    L12Dca,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub name: String,
    pub kind: SolverKind,
    pub rho: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub max_iter: Option<usize>,
    /// Sparsity level handed to the solver; defaults to the trial's s_truth.
    #[serde(default)]
    pub s: Option<usize>,
}

fn default_tol() -> f64 {
    1e-5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    pub matrix: MatrixKind,
    pub m: usize,
    pub n: usize,
    pub s_truth: usize,
    /// 0 for noiseless; the reference noisy setting is 0.01.
    pub noise_scale: f64,
    pub init: InitSpec,
    pub solvers: Vec<SolverSpec>,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default = "default_success_threshold")]
    pub success_threshold: f64,
    #[serde(default)]
    pub record_wall_time: bool,
    #[serde(default)]
    pub record_curves: bool,
}

fn default_success_threshold() -> f64 {
    1e-3
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::param("trials must be >= 1"));
        }
        if !(self.success_threshold > 0.0) {
            return Err(Error::param("success threshold must be positive"));
        }
        if self.matrix == MatrixKind::Custom {
            return Err(Error::param(
                "benchmark matrices must be generated (gaussian or dct)",
            ));
        }
        if self.s_truth < 1 || self.s_truth > self.n {
            return Err(Error::param("s_truth out of range"));
        }
        if self.m < 1 || (self.matrix == MatrixKind::PartialDct && self.m > self.n) {
            return Err(Error::param("bad matrix dimensions"));
        }
        if self.solvers.is_empty() {
            return Err(Error::param("solver roster is empty"));
        }
        if !(self.noise_scale >= 0.0) {
            return Err(Error::param("noise_scale must be nonnegative"));
        }
        for s in &self.solvers {
            if !(s.rho > 0.0) && !matches!(s.kind, SolverKind::L1Admm) {
                return Err(Error::param(format!("solver {} needs rho > 0", s.name)));
            }
        }
        Ok(())
    }
}

/// Result of one solver inside one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOutcome {
    pub solver: String,
    /// None when the solver diverged.
    pub rel_err: Option<f64>,
    pub iterations: usize,
    pub wall_ms: f64,
    pub success: bool,
    pub error: Option<String>,
    /// 10 log10(RelErr) per iteration, when curves were requested.
    pub log_rel_err_curve: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub outcomes: Vec<SolverOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub solver: String,
    pub mean_rel_err: f64,
    pub std_rel_err: f64,
    pub success_rate: f64,
    pub mean_iterations: f64,
    pub mean_wall_ms: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRun {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialResult>,
    pub summary: Vec<SummaryStats>,
}

/// Generates (A, x_truth, b) and runs the whole roster from the shared
/// initialization. Solver failures are recorded per solver; the trial
/// continues.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialResult> {
    cfg.validate()?;
    let (prob, x_truth) = build_instance(cfg, trial)?;
    let x0 = match cfg.init {
        InitSpec::Zeros => DenseVector::zeros(cfg.n),
        InitSpec::L1Admm { rho, iters } => l1_admm_solve(&prob, rho, iters.unwrap_or(cfg.n))?,
    };

    let mut outcomes = Vec::with_capacity(cfg.solvers.len());
    for spec in &cfg.solvers {
        outcomes.push(run_solver(cfg, spec, &prob, &x_truth, &x0));
    }
    Ok(TrialResult { trial, outcomes })
}

fn build_instance(
    cfg: &ExperimentConfig,
    trial: usize,
) -> Result<(LeastSquaresProblem, DenseVector)> {
    let t = trial as u64;
    let matrix_seed = derive_seed(cfg.master_seed, &[t, labels::MATRIX]);
    let signal_seed = derive_seed(cfg.master_seed, &[t, labels::SIGNAL]);
    let a = match cfg.matrix {
        MatrixKind::GaussianUnitColumns => gen_gaussian(cfg.m, cfg.n, matrix_seed)?,
        MatrixKind::PartialDct => gen_partial_dct(cfg.m, cfg.n, matrix_seed)?,
        MatrixKind::Custom => unreachable!("validated"),
    };
    let x_truth = gen_sparse_signal(cfg.n, cfg.s_truth, signal_seed)?;
    let mut b = a.matvec(&x_truth);
    if cfg.noise_scale > 0.0 {
        let mut rng = stream_rng(cfg.master_seed, &[t, labels::NOISE]);
        let noisy: Vec<f64> = b
            .iter()
            .map(|&v| v + cfg.noise_scale * rng.sample::<f64, _>(StandardNormal))
            .collect();
        b = DenseVector::new(noisy)?;
    }
    Ok((LeastSquaresProblem::new(a, b)?, x_truth))
}

fn run_solver(
    cfg: &ExperimentConfig,
    spec: &SolverSpec,
    prob: &LeastSquaresProblem,
    x_truth: &DenseVector,
    x0: &DenseVector,
) -> SolverOutcome {
    let solver_cfg = SolverConfig {
        rho: spec.rho.max(f64::MIN_POSITIVE),
        tol: spec.tol,
        max_iter: spec.max_iter,
        init: Init::Given(x0.clone()),
        record_iterates: cfg.record_curves,
        ..SolverConfig::default()
    };
    let s = spec.s.unwrap_or(cfg.s_truth).min(cfg.n);

    #[cfg(not(target_arch = "wasm32"))]
    let started = cfg.record_wall_time.then(std::time::Instant::now);

    let solved: Result<SolveTrace> = (|| {
        match &spec.kind {
            SolverKind::SdiffFbs { reg } => {
                fbs_solve(prob, &SDiffPenalty::new(*reg, s)?, &solver_cfg)
            }
            SolverKind::SdiffPdca { reg } => {
                pdca_solve(prob, &SDiffPenalty::new(*reg, s)?, &solver_cfg)
            }
            SolverKind::SdiffDcaAdmm { reg } => dca_admm_solve(
                prob,
                &SDiffPenalty::new(*reg, s)?,
                &solver_cfg,
                &AdmmConfig::default(),
            ),
            SolverKind::L1Admm => l1_admm_trace(prob, spec.rho, &solver_cfg),
            SolverKind::Aiht => {
                // The reference accelerated-IHT baseline uses the
                // support-normalized step rule.
                let cfg = SolverConfig {
                    step: crate::solvers::StepRule::NormalizedSupport,
                    ..solver_cfg.clone()
                };
                aiht_solve(prob, s, &cfg)
            }
            SolverKind::HalfThresholding => half_threshold_solve(prob, spec.rho, &solver_cfg),
            SolverKind::L12Dca => {
                l12_dca_solve(prob, spec.rho, &solver_cfg, &AdmmConfig::default())
            }
        }
    })();

    #[cfg(not(target_arch = "wasm32"))]
    let wall_ms = started.map_or(0.0, |t| t.elapsed().as_secs_f64() * 1e3);
    #[cfg(target_arch = "wasm32")]
    let wall_ms = 0.0;

    match solved {
        Ok(trace) => {
            let rel_err = trace.solution.dist_l2(x_truth) / x_truth.norm_l2();
            let curve = trace.iterates.as_ref().map(|iterates| {
                iterates
                    .iter()
                    .map(|x| 10.0 * (x.dist_l2(x_truth) / x_truth.norm_l2()).log10())
                    .collect()
            });
            SolverOutcome {
                solver: spec.name.clone(),
                rel_err: Some(rel_err),
                iterations: trace.iterations,
                wall_ms,
                success: rel_err <= cfg.success_threshold,
                error: None,
                log_rel_err_curve: curve,
            }
        }
        Err(e) => SolverOutcome {
            solver: spec.name.clone(),
            rel_err: None,
            iterations: 0,
            wall_ms,
            success: false,
            error: Some(e.to_string()),
            log_rel_err_curve: None,
        },
    }
}

#[cfg(feature = "parallel")]
fn for_each_trial(cfg: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    use rayon::prelude::*;
    init_thread_pool();
    let mut trials = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Result<Vec<_>>>()?;
    trials.sort_by_key(|t| t.trial);
    Ok(trials)
}

#[cfg(not(feature = "parallel"))]
fn for_each_trial(cfg: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    (0..cfg.trials).map(|t| run_trial(cfg, t)).collect()
}

/// Honors the SDIFF_THREADS cap (set before the first benchmark call).
#[cfg(feature = "parallel")]
fn init_thread_pool() {
    use std::sync::Once;
    static ONCE: Once = Once::new();
    ONCE.call_once(|| {
        if let Some(k) = std::env::var("SDIFF_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&k| k >= 1)
        {
            rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global()
                .ok();
        }
    });
}

/// Runs all trials of a config and aggregates.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<BenchRun> {
    cfg.validate()?;
    let trials = for_each_trial(cfg)?;
    let summary = summarize(cfg, &trials);
    Ok(BenchRun {
        config: cfg.clone(),
        trials,
        summary,
    })
}

/// Order-insensitive aggregation: trials are re-sorted by index before any
/// floating-point accumulation, so permuting execution order cannot change
/// the sums.
pub fn summarize(cfg: &ExperimentConfig, trials: &[TrialResult]) -> Vec<SummaryStats> {
    let mut by_index: Vec<&TrialResult> = trials.iter().collect();
    by_index.sort_by_key(|t| t.trial);
    let trials = by_index;
    cfg.solvers
        .iter()
        .map(|spec| {
            let mut errs = Vec::new();
            let mut iters = 0usize;
            let mut wall = 0.0f64;
            let mut successes = 0usize;
            let mut failures = 0usize;
            let mut count = 0usize;
            for t in &trials {
                for o in t.outcomes.iter().filter(|o| o.solver == spec.name) {
                    count += 1;
                    iters += o.iterations;
                    wall += o.wall_ms;
                    if o.success {
                        successes += 1;
                    }
                    match o.rel_err {
                        Some(e) => errs.push(e),
                        None => failures += 1,
                    }
                }
            }
            let mean = if errs.is_empty() {
                f64::NAN
            } else {
                errs.iter().sum::<f64>() / errs.len() as f64
            };
            let std = if errs.len() > 1 {
                (errs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
                    / (errs.len() - 1) as f64)
                    .sqrt()
            } else {
                0.0
            };
            SummaryStats {
                solver: spec.name.clone(),
                mean_rel_err: mean,
                std_rel_err: std,
                success_rate: if count == 0 {
                    0.0
                } else {
                    successes as f64 / count as f64
                },
                mean_iterations: if count == 0 {
                    0.0
                } else {
                    iters as f64 / count as f64
                },
                mean_wall_ms: if count == 0 { 0.0 } else { wall / count as f64 },
                failures,
            }
        })
        .collect()
}

/// Success rates per ground-truth sparsity (the phase-transition study).
pub fn run_success_rate_sweep(
    cfg: &ExperimentConfig,
    sparsity_list: &[usize],
) -> Result<Vec<(usize, BenchRun)>> {
    let mut out = Vec::with_capacity(sparsity_list.len());
    for &s in sparsity_list {
        let mut sub = cfg.clone();
        sub.id = format!("{}_s{}", cfg.id, s);
        sub.s_truth = s;
        out.push((s, run_experiment(&sub)?));
    }
    Ok(out)
}

/// Mean/std recovery-error rows for a ladder of configs.
pub fn run_relerr_table(cfg_list: &[ExperimentConfig]) -> Result<Vec<BenchRun>> {
    cfg_list.iter().map(run_experiment).collect()
}

/// Matched-instance comparison with per-iteration error curves enabled.
pub fn run_solver_comparison(cfg: &ExperimentConfig) -> Result<BenchRun> {
    let mut cfg = cfg.clone();
    cfg.record_curves = true;
    run_experiment(&cfg)
}

/// Recovery quality across sparsity-level overrides handed to the solvers
/// (ground truth stays fixed).
pub fn run_s_sensitivity(
    cfg: &ExperimentConfig,
    s_list: &[usize],
) -> Result<Vec<(usize, BenchRun)>> {
    let mut out = Vec::with_capacity(s_list.len());
    for &s in s_list {
        let mut sub = cfg.clone();
        sub.id = format!("{}_s{}", cfg.id, s);
        for spec in sub.solvers.iter_mut() {
            if !matches!(spec.kind, SolverKind::L1Admm) {
                spec.s = Some(s.min(sub.n));
            }
        }
        out.push((s, run_experiment(&sub)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tiny_config() -> ExperimentConfig {
        ExperimentConfig {
            id: "tiny".into(),
            matrix: MatrixKind::GaussianUnitColumns,
            m: 8,
            n: 16,
            s_truth: 1,
            noise_scale: 0.0,
            init: InitSpec::L1Admm {
                rho: 1e-6,
                iters: None,
            },
            solvers: vec![SolverSpec {
                name: "sdiff_l1_fbs".into(),
                kind: SolverKind::SdiffFbs {
                    reg: Regularizer::L1,
                },
                rho: 0.1,
                tol: 1e-5,
                max_iter: None,
                s: None,
            }],
            trials: 3,
            master_seed: 42,
            success_threshold: 1e-3,
            record_wall_time: false,
            record_curves: false,
        }
    }

    #[test]
    fn minimal_noiseless_instance_recovers() {
        let cfg = tiny_config();
        let trial = run_trial(&cfg, 0).unwrap();
        let outcome = &trial.outcomes[0];
        assert!(outcome.error.is_none(), "{:?}", outcome.error);
        assert!(
            outcome.rel_err.unwrap() <= 1e-3,
            "rel err {:?}",
            outcome.rel_err
        );
        assert!(outcome.success);
    }

    #[test]
    fn trials_are_deterministic() {
        let cfg = tiny_config();
        let a = run_trial(&cfg, 1).unwrap();
        let b = run_trial(&cfg, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn summary_is_order_insensitive() {
        let cfg = tiny_config();
        let mut trials: Vec<TrialResult> = (0..3).map(|t| run_trial(&cfg, t).unwrap()).collect();
        let forward = summarize(&cfg, &trials);
        trials.reverse();
        let reversed = summarize(&cfg, &trials);
        assert_eq!(forward, reversed);
    }

    #[test]
    fn success_flag_matches_threshold() {
        let cfg = tiny_config();
        let run = run_experiment(&cfg).unwrap();
        for t in &run.trials {
            for o in &t.outcomes {
                assert_eq!(
                    o.success,
                    o.rel_err.is_some_and(|e| e <= cfg.success_threshold)
                );
            }
        }
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut cfg = tiny_config();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = tiny_config();
        cfg.matrix = MatrixKind::Custom;
        assert!(cfg.validate().is_err());
        let mut cfg = tiny_config();
        cfg.s_truth = 100;
        assert!(cfg.validate().is_err());
    }
}
