//! JSON-in/JSON-out API behind the wasm exports. Pure functions so the
//! whole surface is testable on the host toolchain.

use serde::{Deserialize, Serialize};

use sdiff_core::bench::toy::{run_toy_example_with_s, toy_grid, ToySweep};
use sdiff_core::prox::prox_sdiff;
use sdiff_core::rng::derive_seed;
use sdiff_core::sensing::{add_gaussian_noise, gen_gaussian, gen_partial_dct, gen_sparse_signal};
use sdiff_core::solvers::{fbs_solve, l1_admm_solve, l1_admm_trace, Init};
use sdiff_core::vector::top_s_split;
use sdiff_core::{
    DenseVector, LeastSquaresProblem, ProxProblem, Regularizer, SDiffPenalty, SolverConfig,
};

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Penalty curves along the toy solution family x(t).
pub fn toy_curves(step: f64, s: usize) -> Result<String, String> {
    if !(step > 0.0 && step <= 0.05) {
        return Err(format!("step must lie in (0, 0.05], got {step}"));
    }
    if !(1..=6).contains(&s) {
        return Err(format!("s must lie in 1..=6, got {s}"));
    }
    let sweep: ToySweep = run_toy_example_with_s(&toy_grid(step), s);
    to_json(&sweep)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProxRequest {
    pub regularizer: Regularizer,
    pub s: usize,
    pub lambda: f64,
    pub y: Vec<f64>,
    /// Range for the scalar tail-response curve; defaults to 1.5 max|y|.
    #[serde(default)]
    pub curve_range: Option<f64>,
}

#[derive(Serialize)]
struct ProxResponse {
    x: Vec<f64>,
    top_indices: Vec<usize>,
    objective: f64,
    penalty_at_y: f64,
    penalty_at_x: f64,
    /// Tail map t -> prox output of a coordinate ranked below a dominant
    /// on-support entry, showing the shrinkage shape.
    curve_t: Vec<f64>,
    curve_v: Vec<f64>,
}

/// Applies the closed-form prox to the request vector and samples the
/// scalar tail response.
pub fn prox_explore(request: &str) -> Result<String, String> {
    let req: ProxRequest = serde_json::from_str(request).map_err(|e| e.to_string())?;
    let y = DenseVector::new(req.y).map_err(|e| e.to_string())?;
    let penalty = SDiffPenalty::new(req.regularizer, req.s).map_err(|e| e.to_string())?;
    let problem = ProxProblem::new(penalty, req.lambda, y.clone()).map_err(|e| e.to_string())?;
    let x = prox_sdiff(&problem).map_err(|e| e.to_string())?;
    let split = top_s_split(&y, req.s.min(y.len())).map_err(|e| e.to_string())?;

    let range = req
        .curve_range
        .unwrap_or_else(|| 1.5 * y.norm_inf().max(1.0));
    let anchor = 10.0 * range.max(req.lambda);
    let samples = 201;
    let mut curve_t = Vec::with_capacity(samples);
    let mut curve_v = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = -range + 2.0 * range * i as f64 / (samples - 1) as f64;
        let probe = DenseVector::new(vec![anchor, t]).map_err(|e| e.to_string())?;
        let pen1 = SDiffPenalty::new(req.regularizer, 1).map_err(|e| e.to_string())?;
        let prox1 = ProxProblem::new(pen1, req.lambda, probe).map_err(|e| e.to_string())?;
        let out = prox_sdiff(&prox1).map_err(|e| e.to_string())?;
        curve_t.push(t);
        curve_v.push(out[1]);
    }

    to_json(&ProxResponse {
        penalty_at_y: problem.penalty.eval(&y),
        penalty_at_x: problem.penalty.eval(&x),
        objective: problem.objective(&x),
        x: x.into_vec(),
        top_indices: split.top_indices().to_vec(),
        curve_t,
        curve_v,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoveryRequest {
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_s")]
    pub s_truth: usize,
    /// Sparsity level handed to the solver; defaults to s_truth.
    #[serde(default)]
    pub s: Option<usize>,
    #[serde(default)]
    pub noise_scale: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_reg")]
    pub regularizer: Regularizer,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default)]
    pub dct: bool,
}

fn default_m() -> usize {
    32
}
fn default_n() -> usize {
    128
}
fn default_s() -> usize {
    5
}
fn default_seed() -> u64 {
    7
}
fn default_reg() -> Regularizer {
    Regularizer::L1
}
fn default_rho() -> f64 {
    0.1
}

#[derive(Serialize)]
struct SolverReport {
    x: Vec<f64>,
    rel_err: f64,
    iterations: usize,
    converged: bool,
    log_rel_err_curve: Vec<f64>,
}

#[derive(Serialize)]
struct RecoveryResponse {
    truth: Vec<f64>,
    lipschitz: f64,
    sdiff_fbs: SolverReport,
    l1_admm: SolverReport,
}

/// One seeded compressed-sensing instance: s-difference FBS against the
/// plain l1-ADMM baseline, with per-iteration error curves.
pub fn recovery_demo(request: &str) -> Result<String, String> {
    let req: RecoveryRequest = serde_json::from_str(request).map_err(|e| e.to_string())?;
    if req.n > 512 || req.m > req.n || req.m < 4 {
        return Err(format!(
            "need 4 <= m <= n <= 512, got m={} n={}",
            req.m, req.n
        ));
    }
    if req.s_truth < 1 || req.s_truth > req.m {
        return Err(format!("need 1 <= s_truth <= m, got {}", req.s_truth));
    }
    let a = if req.dct {
        gen_partial_dct(req.m, req.n, derive_seed(req.seed, &[1]))
    } else {
        gen_gaussian(req.m, req.n, derive_seed(req.seed, &[1]))
    }
    .map_err(|e| e.to_string())?;
    let truth = gen_sparse_signal(req.n, req.s_truth, derive_seed(req.seed, &[2]))
        .map_err(|e| e.to_string())?;
    let b = add_gaussian_noise(
        &a.matvec(&truth),
        req.noise_scale,
        derive_seed(req.seed, &[3]),
    );
    let prob = LeastSquaresProblem::new(a, b).map_err(|e| e.to_string())?;

    let warm = l1_admm_solve(&prob, 1e-6, req.n).map_err(|e| e.to_string())?;
    let cfg = SolverConfig {
        init: Init::Given(warm),
        record_iterates: true,
        ..SolverConfig::new(req.rho)
    };

    let pen = SDiffPenalty::new(
        req.regularizer,
        req.s.unwrap_or(req.s_truth).clamp(1, req.n),
    )
    .map_err(|e| e.to_string())?;
    let fbs = fbs_solve(&prob, &pen, &cfg).map_err(|e| e.to_string())?;
    let admm = l1_admm_trace(&prob, 1e-6, &cfg).map_err(|e| e.to_string())?;

    let report = |trace: &sdiff_core::SolveTrace| SolverReport {
        rel_err: trace.solution.dist_l2(&truth) / truth.norm_l2(),
        iterations: trace.iterations,
        converged: trace.converged,
        log_rel_err_curve: trace
            .iterates
            .as_ref()
            .map(|iters| {
                iters
                    .iter()
                    .map(|x| 10.0 * (x.dist_l2(&truth) / truth.norm_l2()).log10())
                    .collect()
            })
            .unwrap_or_default(),
        x: trace.solution.as_slice().to_vec(),
    };

    to_json(&RecoveryResponse {
        lipschitz: prob.lipschitz(),
        sdiff_fbs: report(&fbs),
        l1_admm: report(&admm),
        truth: truth.into_vec(),
    })
}
