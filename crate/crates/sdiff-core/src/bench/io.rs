//! CSV/JSON persistence for benchmark results.
//!
//! Trial CSV schema:
//! `config_id,matrix_kind,M,N,s_truth,noise,solver,trial,rel_err,iterations,wall_ms,success`
//! with floats at 17 significant digits. Every artifact starts with a
//! `# seed=<master seed>` comment line so the generating seed travels with
//! the data. Rows are sorted by (config id, trial index, solver name);
//! writes are idempotent overwrites.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::BenchRun;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn fmt_f(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Writes per-trial rows of one or more runs.
pub fn write_results(runs: &[BenchRun], path: &Path, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Csv => write_results_csv(runs, path),
        OutputFormat::Json => write_json(&runs.to_vec(), path),
    }
}

fn write_results_csv(runs: &[BenchRun], path: &Path) -> Result<()> {
    let err = io_err(path);
    let mut w = BufWriter::new(File::create(path).map_err(&err)?);
    if let Some(first) = runs.first() {
        writeln!(w, "# seed={}", first.config.master_seed).map_err(&err)?;
    }
    writeln!(
        w,
        "config_id,matrix_kind,M,N,s_truth,noise,solver,trial,rel_err,iterations,wall_ms,success"
    )
    .map_err(&err)?;
    let mut sorted_runs: Vec<&BenchRun> = runs.iter().collect();
    sorted_runs.sort_by(|a, b| a.config.id.cmp(&b.config.id));
    for run in sorted_runs {
        let cfg = &run.config;
        for trial in &run.trials {
            let mut outcomes: Vec<_> = trial.outcomes.iter().collect();
            outcomes.sort_by(|a, b| a.solver.cmp(&b.solver));
            for o in outcomes {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    cfg.id,
                    cfg.matrix.label(),
                    cfg.m,
                    cfg.n,
                    cfg.s_truth,
                    fmt_f(cfg.noise_scale),
                    o.solver,
                    trial.trial,
                    fmt_f(o.rel_err.unwrap_or(f64::INFINITY)),
                    o.iterations,
                    fmt_f(o.wall_ms),
                    o.success
                )
                .map_err(&err)?;
            }
        }
    }
    w.flush().map_err(&err)
}

/// JSON dump of full runs; round-trips through serde.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let err = io_err(path);
    let mut w = BufWriter::new(File::create(path).map_err(&err)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Format {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    w.write_all(b"\n").map_err(&err)?;
    w.flush().map_err(&err)
}

pub fn read_runs_json(path: &Path) -> Result<Vec<BenchRun>> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(file).map_err(|e| Error::Format {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Summary table: one row per (config, solver).
pub fn write_summary_csv(runs: &[BenchRun], path: &Path) -> Result<()> {
    let err = io_err(path);
    let mut w = BufWriter::new(File::create(path).map_err(&err)?);
    if let Some(first) = runs.first() {
        writeln!(w, "# seed={}", first.config.master_seed).map_err(&err)?;
    }
    writeln!(
        w,
        "config_id,matrix_kind,M,N,s_truth,noise,solver,mean_rel_err,std_rel_err,success_rate,mean_iterations,mean_wall_ms,failures"
    )
    .map_err(&err)?;
    for run in runs {
        let cfg = &run.config;
        for s in &run.summary {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                cfg.id,
                cfg.matrix.label(),
                cfg.m,
                cfg.n,
                cfg.s_truth,
                fmt_f(cfg.noise_scale),
                s.solver,
                fmt_f(s.mean_rel_err),
                fmt_f(s.std_rel_err),
                fmt_f(s.success_rate),
                fmt_f(s.mean_iterations),
                fmt_f(s.mean_wall_ms),
                s.failures
            )
            .map_err(&err)?;
        }
    }
    w.flush().map_err(&err)
}

/// Two-column (x, y) plot data.
pub fn write_curve_csv(points: &[(f64, f64)], seed: u64, path: &Path) -> Result<()> {
    let err = io_err(path);
    let mut w = BufWriter::new(File::create(path).map_err(&err)?);
    writeln!(w, "# seed={seed}").map_err(&err)?;
    for (x, y) in points {
        writeln!(w, "{},{}", fmt_f(*x), fmt_f(*y)).map_err(&err)?;
    }
    w.flush().map_err(&err)
}

/// Success-rate rows for a sparsity sweep: per-solver columns.
pub fn write_sweep_csv(sweep: &[(usize, BenchRun)], path: &Path) -> Result<()> {
    let err = io_err(path);
    let mut w = BufWriter::new(File::create(path).map_err(&err)?);
    let Some((_, first)) = sweep.first() else {
        writeln!(w, "s_truth").map_err(&err)?;
        return w.flush().map_err(&err);
    };
    writeln!(w, "# seed={}", first.config.master_seed).map_err(&err)?;
    let solvers: Vec<String> = first.summary.iter().map(|s| s.solver.clone()).collect();
    writeln!(w, "x_value,{}", solvers.join(",")).map_err(&err)?;
    for (s, run) in sweep {
        let cells: Vec<String> = run
            .summary
            .iter()
            .map(|st| fmt_f(st.success_rate))
            .collect();
        writeln!(w, "{s},{}", cells.join(",")).map_err(&err)?;
    }
    w.flush().map_err(&err)
}

/// Mean Rel.Err rows keyed by an x value (sparsity-sensitivity study).
pub fn write_mean_relerr_csv(sweep: &[(usize, BenchRun)], path: &Path) -> Result<()> {
    let err = io_err(path);
    let mut w = BufWriter::new(File::create(path).map_err(&err)?);
    let Some((_, first)) = sweep.first() else {
        writeln!(w, "x_value").map_err(&err)?;
        return w.flush().map_err(&err);
    };
    writeln!(w, "# seed={}", first.config.master_seed).map_err(&err)?;
    let solvers: Vec<String> = first.summary.iter().map(|s| s.solver.clone()).collect();
    writeln!(w, "x_value,{}", solvers.join(",")).map_err(&err)?;
    for (s, run) in sweep {
        let cells: Vec<String> = run
            .summary
            .iter()
            .map(|st| fmt_f(st.mean_rel_err))
            .collect();
        writeln!(w, "{s},{}", cells.join(",")).map_err(&err)?;
    }
    w.flush().map_err(&err)
}

/// Per-iteration Log-Rel.Err curves of the first trial of a comparison run.
pub fn write_comparison_curves(run: &BenchRun, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let mut written = Vec::new();
    let Some(first_trial) = run.trials.first() else {
        return Ok(written);
    };
    for o in &first_trial.outcomes {
        if let Some(curve) = &o.log_rel_err_curve {
            let points: Vec<(f64, f64)> = curve
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as f64, v))
                .collect();
            let path = dir.join(format!("{}_{}_curve.csv", run.config.id, o.solver));
            write_curve_csv(&points, run.config.master_seed, &path)?;
            written.push(path);
        }
    }
    Ok(written)
}
