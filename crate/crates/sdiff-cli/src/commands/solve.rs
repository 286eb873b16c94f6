//! `sdiff solve`: one instance, one solver, solution + trace artifacts.

use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;

use sdiff_core::error::{Error, Result};
use sdiff_core::solvers::{
    aiht_solve, dca_admm_solve, fbs_solve, half_threshold_solve, l12_dca_solve, l1_admm_trace,
    pdca_solve, AdmmConfig,
};
use sdiff_core::SolveTrace;

use crate::config::{write_vector, SolveConfig, SolverChoice};

#[derive(Serialize)]
struct TraceSummary<'a> {
    seed: u64,
    solver: &'a str,
    converged: bool,
    iterations: usize,
    objective: f64,
    fixed_point_residual: f64,
    rel_err: Option<f64>,
    solution_path: String,
}

pub fn run(config_path: &Path, out_dir: &Path, seed: u64, quiet: bool) -> Result<ExitCode> {
    let cfg = SolveConfig::load(config_path)?;
    let instance = cfg.build(seed)?;
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.display().to_string(),
        source,
    })?;

    let solver_name = instance.solver.name();
    let trace: SolveTrace = match instance.solver {
        SolverChoice::Fbs => fbs_solve(&instance.problem, &instance.penalty, &instance.solver_cfg)?,
        SolverChoice::Pdca => {
            pdca_solve(&instance.problem, &instance.penalty, &instance.solver_cfg)?
        }
        SolverChoice::DcaAdmm => dca_admm_solve(
            &instance.problem,
            &instance.penalty,
            &instance.solver_cfg,
            &AdmmConfig::default(),
        )?,
        SolverChoice::Aiht => aiht_solve(
            &instance.problem,
            instance.penalty.s(),
            &instance.solver_cfg,
        )?,
        SolverChoice::HalfThresholding => {
            half_threshold_solve(&instance.problem, instance.rho, &instance.solver_cfg)?
        }
        SolverChoice::L1Admm => {
            l1_admm_trace(&instance.problem, instance.rho, &instance.solver_cfg)?
        }
        SolverChoice::L12Dca => l12_dca_solve(
            &instance.problem,
            instance.rho,
            &instance.solver_cfg,
            &AdmmConfig::default(),
        )?,
    };

    let solution_path = out_dir.join("solution.txt");
    write_vector(&trace.solution, &solution_path)?;

    let rel_err = instance
        .truth
        .as_ref()
        .map(|x| trace.solution.dist_l2(x) / x.norm_l2());
    let summary = TraceSummary {
        seed,
        solver: solver_name,
        converged: trace.converged,
        iterations: trace.iterations,
        objective: *trace.objective_history.last().unwrap_or(&f64::NAN),
        fixed_point_residual: trace.fixed_point_residual,
        rel_err,
        solution_path: solution_path.display().to_string(),
    };
    let trace_path = out_dir.join("trace.json");
    sdiff_core::bench::io::write_json(&summary, &trace_path)?;

    if !quiet {
        println!(
            "{solver_name}: converged={} iterations={} objective={:.6e}{}",
            trace.converged,
            trace.iterations,
            summary.objective,
            rel_err.map_or(String::new(), |e| format!(" rel_err={e:.3e}")),
        );
        println!(
            "wrote {} and {}",
            solution_path.display(),
            trace_path.display()
        );
    }
    Ok(if trace.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
