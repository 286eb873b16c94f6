//! `sdiff toy`: penalty curves along the toy solution family.

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use sdiff_core::bench::io::write_curve_csv;
use sdiff_core::bench::toy::{run_toy_example_with_s, toy_grid};
use sdiff_core::error::{Error, Result};

pub fn run(step: f64, s: usize, out_dir: &Path, seed: u64, quiet: bool) -> Result<ExitCode> {
    if !(step > 0.0 && step <= 0.05) {
        return Err(Error::InvalidParameter(format!(
            "grid step must lie in (0, 0.05], got {step}"
        )));
    }
    if !(1..=6).contains(&s) {
        return Err(Error::InvalidParameter(format!(
            "s must lie in 1..=6, got {s}"
        )));
    }
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let grid = toy_grid(step);
    let sweep = run_toy_example_with_s(&grid, s);

    let curves_path = out_dir.join("toy_curves.csv");
    {
        let err = |source| Error::Io {
            path: curves_path.display().to_string(),
            source,
        };
        let mut w = std::io::BufWriter::new(std::fs::File::create(&curves_path).map_err(err)?);
        writeln!(w, "# seed={seed}").map_err(err)?;
        let labels: Vec<&str> = sweep.curves.iter().map(|c| c.label.as_str()).collect();
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
    write_curve_csv(&minima, seed, &minima_path)?;

    if !quiet {
        println!("toy landscape, s = {s}, step = {step}");
        for c in &sweep.curves {
            println!(
                "  {:<22} argmin t = {:>6.2}  min = {:.4}",
                c.label, c.argmin_t, c.min_value
            );
        }
        println!(
            "wrote {} and {}",
            curves_path.display(),
            minima_path.display()
        );
    }
    Ok(ExitCode::SUCCESS)
}
