//! Named experiment presets mirroring the reference studies, plus the
//! desk-scale defaults (fewer trials, the first two rungs of the size
//! ladder). Full-scale variants keep the original counts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regularizer::Regularizer;
use crate::sensing::MatrixKind;

use super::io::{
    write_comparison_curves, write_curve_csv, write_json, write_mean_relerr_csv, write_results,
    write_summary_csv, write_sweep_csv, OutputFormat,
};
use super::toy::{run_toy_example, toy_grid};
use super::{
    run_s_sensitivity, run_solver_comparison, run_success_rate_sweep, BenchRun, ExperimentConfig,
    InitSpec, SolverKind, SolverSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Fig3Gaussian,
    Fig3Dct,
    Table2,
    Table3,
    Table4,
    Table5,
    Table6,
    Fig5,
    Toy,
}

pub const PRESET_NAMES: &[&str] = &[
    "fig3_gaussian",
    "fig3_dct",
    "table2",
    "table3",
    "table4",
    "table5",
    "table6",
    "fig5",
    "toy",
];

impl Preset {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "fig3_gaussian" => Some(Self::Fig3Gaussian),
            "fig3_dct" => Some(Self::Fig3Dct),
            "table2" => Some(Self::Table2),
            "table3" => Some(Self::Table3),
            "table4" => Some(Self::Table4),
            "table5" => Some(Self::Table5),
            "table6" => Some(Self::Table6),
            "fig5" => Some(Self::Fig5),
            "toy" => Some(Self::Toy),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Fig3Gaussian => "fig3_gaussian",
            Self::Fig3Dct => "fig3_dct",
            Self::Table2 => "table2",
            Self::Table3 => "table3",
            Self::Table4 => "table4",
            Self::Table5 => "table5",
            Self::Table6 => "table6",
            Self::Fig5 => "fig5",
            Self::Toy => "toy",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PresetOptions {
    /// Full-scale trial counts and the complete size ladder.
    pub full_scale: bool,
    /// Overrides the preset's trial count.
    pub trials: Option<usize>,
    pub seed: u64,
    /// Record wall-clock times into the artifacts (breaks byte-level
    /// reproducibility of reruns).
    pub timing: bool,
}

impl Default for PresetOptions {
    fn default() -> Self {
        Self {
            full_scale: false,
            trials: None,
            seed: 42,
            timing: false,
        }
    }
}

#[derive(Debug)]
pub struct PresetArtifacts {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// Reference rho choices: 1e-1 (noiseless) / 1 (noisy) for the FBS-based
/// s-difference solvers, 1e-6 / 1e-3 for the ADMM-based and other methods.
fn rho_pair(noisy: bool) -> (f64, f64) {
    if noisy {
        (1.0, 1e-3)
    } else {
        (0.1, 1e-6)
    }
}

fn spec(name: &str, kind: SolverKind, rho: f64) -> SolverSpec {
    SolverSpec {
        name: name.into(),
        kind,
        rho,
        tol: 1e-5,
        max_iter: None,
        s: None,
    }
}

/// The seven-solver roster of the success-rate and table studies.
fn full_roster(noisy: bool) -> Vec<SolverSpec> {
    let (fbs_rho, other_rho) = rho_pair(noisy);
    vec![
        spec("l1_admm", SolverKind::L1Admm, other_rho),
        spec("l12_dca", SolverKind::L12Dca, other_rho),
        spec("half_threshold", SolverKind::HalfThresholding, other_rho),
        spec("aiht", SolverKind::Aiht, other_rho),
        spec(
            "sdiff_l1_fbs",
            SolverKind::SdiffFbs {
                reg: Regularizer::L1,
            },
            fbs_rho,
        ),
        spec(
            "sdiff_l1l2_fbs",
            SolverKind::SdiffFbs {
                reg: Regularizer::L1MinusL2 { a: 1.0 },
            },
            fbs_rho,
        ),
        spec(
            "sdiff_l2_fbs",
            SolverKind::SdiffFbs {
                reg: Regularizer::L2,
            },
            fbs_rho,
        ),
    ]
}

fn base_config(
    id: String,
    matrix: MatrixKind,
    (m, n, s_truth): (usize, usize, usize),
    noise_scale: f64,
    solvers: Vec<SolverSpec>,
    trials: usize,
    opts: &PresetOptions,
) -> ExperimentConfig {
    let (_, warm_rho) = rho_pair(noise_scale > 0.0);
    ExperimentConfig {
        id,
        matrix,
        m,
        n,
        s_truth,
        noise_scale,
        init: InitSpec::L1Admm {
            rho: warm_rho,
            iters: None,
        },
        solvers,
        trials: opts.trials.unwrap_or(trials),
        master_seed: opts.seed,
        success_threshold: 1e-3,
        record_wall_time: opts.timing,
        record_curves: false,
    }
}

/// Size ladder (256i, 1024i, 48i).
fn ladder(opts: &PresetOptions, full_count: usize) -> Vec<(usize, usize, usize)> {
    let count = if opts.full_scale { full_count } else { 2 };
    (1..=count).map(|i| (256 * i, 1024 * i, 48 * i)).collect()
}

pub fn run_preset(preset: Preset, out_dir: &Path, opts: &PresetOptions) -> Result<PresetArtifacts> {
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    match preset {
        Preset::Fig3Gaussian => {
            success_sweep(preset, MatrixKind::GaussianUnitColumns, out_dir, opts)
        }
        Preset::Fig3Dct => success_sweep(preset, MatrixKind::PartialDct, out_dir, opts),
        Preset::Table2 => relerr_table(
            preset,
            MatrixKind::GaussianUnitColumns,
            false,
            out_dir,
            opts,
        ),
        Preset::Table3 => relerr_table(preset, MatrixKind::PartialDct, false, out_dir, opts),
        Preset::Table4 => {
            relerr_table(preset, MatrixKind::GaussianUnitColumns, true, out_dir, opts)
        }
        Preset::Table5 => relerr_table(preset, MatrixKind::PartialDct, true, out_dir, opts),
        Preset::Table6 => solver_comparison(out_dir, opts),
        Preset::Fig5 => s_sensitivity(out_dir, opts),
        Preset::Toy => toy_sweep(out_dir, opts),
    }
}

fn success_sweep(
    preset: Preset,
    matrix: MatrixKind,
    out_dir: &Path,
    opts: &PresetOptions,
) -> Result<PresetArtifacts> {
    let name = preset.name();
    let sparsities: Vec<usize> = if opts.full_scale {
        (4..=40).step_by(4).collect()
    } else {
        vec![8, 16, 24, 32]
    };
    let trials = if opts.full_scale { 100 } else { 50 };
    let cfg = base_config(
        name.to_string(),
        matrix,
        (64, 256, sparsities[0]),
        0.0,
        full_roster(false),
        trials,
        opts,
    );
    let sweep = run_success_rate_sweep(&cfg, &sparsities)?;

    let mut files = Vec::new();
    let success_path = out_dir.join(format!("{name}_success.csv"));
    write_sweep_csv(&sweep, &success_path)?;
    files.push(success_path);
    let runs: Vec<BenchRun> = sweep.iter().map(|(_, r)| r.clone()).collect();
    files.push(write_standard(&runs, name, out_dir)?);

    let mut summary = format!(
        "{name}: success rates over s = {sparsities:?} ({} trials each)\n",
        cfg.trials
    );
    for (s, run) in &sweep {
        let _ = write!(summary, "  s={s:>3}:");
        for st in &run.summary {
            let _ = write!(summary, " {}={:.2}", st.solver, st.success_rate);
        }
        summary.push('\n');
    }
    Ok(PresetArtifacts { files, summary })
}

fn relerr_table(
    preset: Preset,
    matrix: MatrixKind,
    noisy: bool,
    out_dir: &Path,
    opts: &PresetOptions,
) -> Result<PresetArtifacts> {
    let name = preset.name();
    let noise = if noisy { 0.01 } else { 0.0 };
    let trials = if opts.full_scale { 30 } else { 10 };
    let full_count = if noisy { 4 } else { 8 };
    let configs: Vec<ExperimentConfig> = ladder(opts, full_count)
        .into_iter()
        .map(|dims| {
            base_config(
                format!("{name}_m{}", dims.0),
                matrix,
                dims,
                noise,
                full_roster(noisy),
                trials,
                opts,
            )
        })
        .collect();
    let runs = super::run_relerr_table(&configs)?;
    let mut files = vec![write_standard(&runs, name, out_dir)?];
    let summary_path = out_dir.join(format!("{name}_summary.csv"));
    write_summary_csv(&runs, &summary_path)?;
    files.insert(0, summary_path);

    let mut summary = format!(
        "{name}: mean Rel.Err ({} trials per size)\n",
        configs[0].trials
    );
    for run in &runs {
        let _ = write!(
            summary,
            "  ({}, {}, {}):",
            run.config.m, run.config.n, run.config.s_truth
        );
        for st in &run.summary {
            let _ = write!(summary, " {}={:.3e}", st.solver, st.mean_rel_err);
        }
        summary.push('\n');
    }
    Ok(PresetArtifacts { files, summary })
}

fn solver_comparison(out_dir: &Path, opts: &PresetOptions) -> Result<PresetArtifacts> {
    let trials = if opts.full_scale { 30 } else { 3 };
    let mut runs = Vec::new();
    let mut files = Vec::new();
    for (matrix, noisy) in [
        (MatrixKind::GaussianUnitColumns, false),
        (MatrixKind::PartialDct, false),
        (MatrixKind::GaussianUnitColumns, true),
        (MatrixKind::PartialDct, true),
    ] {
        let (fbs_rho, other_rho) = rho_pair(noisy);
        let solvers = vec![
            spec(
                "sdiff_l1_dca_admm",
                SolverKind::SdiffDcaAdmm {
                    reg: Regularizer::L1,
                },
                other_rho,
            ),
            spec(
                "sdiff_l1_pdca",
                SolverKind::SdiffPdca {
                    reg: Regularizer::L1,
                },
                fbs_rho,
            ),
            spec(
                "sdiff_l1_fbs",
                SolverKind::SdiffFbs {
                    reg: Regularizer::L1,
                },
                fbs_rho,
            ),
        ];
        let id = format!(
            "table6_{}_{}",
            matrix.label(),
            if noisy { "noisy" } else { "noiseless" }
        );
        let cfg = base_config(
            id,
            matrix,
            (256, 1024, 48),
            if noisy { 0.01 } else { 0.0 },
            solvers,
            trials,
            opts,
        );
        let run = run_solver_comparison(&cfg)?;
        files.extend(write_comparison_curves(&run, out_dir)?);
        runs.push(run);
    }
    let summary_path = out_dir.join("table6_summary.csv");
    write_summary_csv(&runs, &summary_path)?;
    files.insert(0, summary_path);
    files.push(write_standard(&runs, "table6", out_dir)?);

    let mut summary = format!("table6: solver comparison at (256, 1024, 48), {trials} trials\n");
    for run in &runs {
        let _ = write!(summary, "  {}:", run.config.id);
        for st in &run.summary {
            let _ = write!(
                summary,
                " {}[err={:.3e} iters={:.0}]",
                st.solver, st.mean_rel_err, st.mean_iterations
            );
        }
        summary.push('\n');
    }
    Ok(PresetArtifacts { files, summary })
}

fn s_sensitivity(out_dir: &Path, opts: &PresetOptions) -> Result<PresetArtifacts> {
    let trials = if opts.full_scale { 30 } else { 3 };
    let s_list: Vec<usize> = if opts.full_scale {
        vec![
            1, 8, 16, 24, 32, 40, 48, 64, 96, 128, 192, 256, 384, 512, 768, 1000,
        ]
    } else {
        vec![16, 32, 48, 64, 96]
    };
    let mut files = Vec::new();
    let mut summary = format!("fig5: Rel.Err versus solver-side s ({trials} trials)\n");
    for matrix in [MatrixKind::GaussianUnitColumns, MatrixKind::PartialDct] {
        let (fbs_rho, other_rho) = rho_pair(false);
        let reg = Regularizer::L1MinusL2 { a: 1.0 };
        let solvers = vec![
            spec("sdiff_l1l2_fbs", SolverKind::SdiffFbs { reg }, fbs_rho),
            spec(
                "sdiff_l1l2_dca_admm",
                SolverKind::SdiffDcaAdmm { reg },
                other_rho,
            ),
            spec("l1_admm", SolverKind::L1Admm, other_rho),
        ];
        let id = format!("fig5_{}", matrix.label());
        let cfg = base_config(
            id.clone(),
            matrix,
            (256, 1024, 48),
            0.0,
            solvers,
            trials,
            opts,
        );
        let sweep = run_s_sensitivity(&cfg, &s_list)?;
        let path = out_dir.join(format!("{id}_relerr.csv"));
        write_mean_relerr_csv(&sweep, &path)?;
        files.push(path);
        for (s, run) in &sweep {
            let _ = write!(summary, "  {} s={s:>4}:", matrix.label());
            for st in &run.summary {
                let _ = write!(summary, " {}={:.3e}", st.solver, st.mean_rel_err);
            }
            summary.push('\n');
        }
        let runs: Vec<BenchRun> = sweep.into_iter().map(|(_, r)| r).collect();
        files.push(write_standard(&runs, &id, out_dir)?);
    }
    Ok(PresetArtifacts { files, summary })
}

fn toy_sweep(out_dir: &Path, opts: &PresetOptions) -> Result<PresetArtifacts> {
    let grid = toy_grid(0.01);
    let sweep = run_toy_example(&grid);

    let curves_path = out_dir.join("toy_curves.csv");
    {
        use std::io::Write;
        let err = |source| Error::Io {
            path: curves_path.display().to_string(),
            source,
        };
        let mut w = std::io::BufWriter::new(std::fs::File::create(&curves_path).map_err(err)?);
        let labels: Vec<&str> = sweep.curves.iter().map(|c| c.label.as_str()).collect();
        writeln!(w, "# seed={}", opts.seed).map_err(err)?;
        writeln!(w, "t,{}", labels.join(",")).map_err(err)?;
        for (i, t) in sweep.t.iter().enumerate() {
            let cells: Vec<String> = sweep
                .curves
                .iter()
                .map(|c| format!("{:.16e}", c.values[i]))
                .collect();
            writeln!(w, "{t:.6},{}", cells.join(",")).map_err(err)?;
        }
        w.flush().map_err(err)?;
    }

    let minima: Vec<(f64, f64)> = sweep
        .curves
        .iter()
        .map(|c| (c.argmin_t, c.min_value))
        .collect();
    let minima_path = out_dir.join("toy_minima.csv");
    write_curve_csv(&minima, opts.seed, &minima_path)?;

    let mut summary = String::from("toy: grid minima along x(t)\n");
    for c in &sweep.curves {
        let _ = writeln!(
            summary,
            "  {:<22} argmin t = {:>6.2}  min = {:.4}",
            c.label, c.argmin_t, c.min_value
        );
    }
    Ok(PresetArtifacts {
        files: vec![curves_path, minima_path],
        summary,
    })
}

/// Per-trial CSV plus the JSON dump every preset writes.
fn write_standard(runs: &[BenchRun], name: &str, out_dir: &Path) -> Result<PathBuf> {
    let trials_path = out_dir.join(format!("{name}_trials.csv"));
    write_results(runs, &trials_path, OutputFormat::Csv)?;
    let json_path = out_dir.join(format!("{name}_runs.json"));
    write_json(&runs, &json_path)?;
    Ok(trials_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_round_trip() {
        for name in PRESET_NAMES {
            let p = Preset::from_name(name).unwrap();
            assert_eq!(p.name(), *name);
        }
        assert!(Preset::from_name("nope").is_none());
    }

    #[test]
    fn toy_preset_reports_t0_minima() {
        let dir = std::env::temp_dir().join("sdiff-preset-toy");
        let opts = PresetOptions::default();
        let out = run_preset(Preset::Toy, &dir, &opts).unwrap();
        assert_eq!(out.files.len(), 2);
        assert!(out.summary.contains("sdiff_l1"));
        std::fs::remove_dir_all(&dir).ok();
    }
}
