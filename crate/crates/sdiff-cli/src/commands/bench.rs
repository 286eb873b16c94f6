//! `sdiff bench`: named presets or a custom experiment config.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use sdiff_core::bench::io::{write_json, write_results, write_summary_csv, OutputFormat};
use sdiff_core::bench::presets::{run_preset, Preset, PresetOptions, PRESET_NAMES};
use sdiff_core::bench::{run_experiment, ExperimentConfig};
use sdiff_core::error::{Error, Result};

pub struct BenchArgs {
    pub preset: Option<String>,
    pub config: Option<PathBuf>,
    pub trials: Option<usize>,
    pub solver: Option<String>,
    pub full: bool,
    pub timing: bool,
    pub out: PathBuf,
    pub seed: u64,
    pub quiet: bool,
}

pub fn run(args: BenchArgs) -> Result<ExitCode> {
    match (&args.preset, &args.config) {
        (Some(name), None) => run_named(name, &args),
        (None, Some(path)) => run_custom(path, &args),
        _ => Err(Error::InvalidParameter(
            "provide exactly one of --preset or --config".into(),
        )),
    }
}

fn run_named(name: &str, args: &BenchArgs) -> Result<ExitCode> {
    let Some(preset) = Preset::from_name(name) else {
        return Err(Error::InvalidParameter(format!(
            "unknown preset '{name}'; valid presets: {}",
            PRESET_NAMES.join(", ")
        )));
    };
    let opts = PresetOptions {
        full_scale: args.full,
        trials: args.trials,
        seed: args.seed,
        timing: args.timing,
    };
    let outcome = run_preset(preset, &args.out, &opts)?;
    if !args.quiet {
        print!("{}", outcome.summary);
        for f in &outcome.files {
            println!("wrote {}", f.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_custom(path: &Path, args: &BenchArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    cfg.master_seed = args.seed;
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    cfg.record_wall_time = args.timing;
    if let Some(filter) = &args.solver {
        let wanted: Vec<&str> = filter.split(',').map(str::trim).collect();
        cfg.solvers.retain(|s| wanted.contains(&s.name.as_str()));
        if cfg.solvers.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "--solver {filter} matches no roster entry"
            )));
        }
    }

    std::fs::create_dir_all(&args.out).map_err(|source| Error::Io {
        path: args.out.display().to_string(),
        source,
    })?;
    let run = run_experiment(&cfg)?;
    let runs = vec![run];
    let trials_path = args.out.join(format!("{}_trials.csv", cfg.id));
    write_results(&runs, &trials_path, OutputFormat::Csv)?;
    let summary_path = args.out.join(format!("{}_summary.csv", cfg.id));
    write_summary_csv(&runs, &summary_path)?;
    let json_path = args.out.join(format!("{}_runs.json", cfg.id));
    write_json(&runs, &json_path)?;

    if !args.quiet {
        for st in &runs[0].summary {
            println!(
                "{}: mean_rel_err={:.3e} success_rate={:.2} mean_iters={:.0}",
                st.solver, st.mean_rel_err, st.success_rate, st.mean_iterations
            );
        }
        for p in [&trials_path, &summary_path, &json_path] {
            println!("wrote {}", p.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}
