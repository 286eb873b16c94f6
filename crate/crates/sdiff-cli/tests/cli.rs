//! End-to-end tests of the `sdiff` binary: exit codes, artifact contents,
//! and agreement with direct library calls.

use std::path::Path;
use std::process::{Command, Output};

use sdiff_core::sensing::{MatrixKind, SensingMatrix};
use sdiff_core::solvers::fbs_solve;
use sdiff_core::vector::truncate;
use sdiff_core::{DenseVector, LeastSquaresProblem, Regularizer, SDiffPenalty, SolverConfig};

fn sdiff(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdiff"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_identity_dump(path: &Path, n: usize) {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        data[i * n + i] = 1.0;
    }
    SensingMatrix::from_dense(n, n, data, MatrixKind::Custom, 0)
        .unwrap()
        .write_binary(path)
        .unwrap();
}

#[test]
fn solve_identity_smoke_matches_truncated_observation() {
    let dir = tempfile::tempdir().unwrap();
    write_identity_dump(&dir.path().join("eye.bin"), 4);
    std::fs::write(dir.path().join("b.txt"), "5.0\n0.5\n-2.0\n0.0\n").unwrap();
    // rho large enough that the prox zeroes the off-support tail of b.
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{
            "matrix": {"load": "eye.bin"},
            "observation": {"load": "b.txt"},
            "penalty": {"regularizer": "l1", "s": 2},
            "solver": "fbs",
            "rho": 1.0
        }"#,
    )
    .unwrap();
    let out = sdiff(
        &["solve", "--config", "cfg.json", "--out", "result"],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    let solution: Vec<f64> = std::fs::read_to_string(dir.path().join("result/solution.txt"))
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    let b = DenseVector::new(vec![5.0, 0.5, -2.0, 0.0]).unwrap();
    let expected = truncate(&b, 2).unwrap();
    for (got, want) in solution.iter().zip(expected.iter()) {
        assert!((got - want).abs() < 1e-6, "{solution:?}");
    }

    // Thin-adapter check: the same config through the library.
    let mut data = vec![0.0; 16];
    for i in 0..4 {
        data[i * 4 + i] = 1.0;
    }
    let prob = LeastSquaresProblem::new(
        SensingMatrix::from_dense(4, 4, data, MatrixKind::Custom, 0).unwrap(),
        b,
    )
    .unwrap();
    let pen = SDiffPenalty::new(Regularizer::L1, 2).unwrap();
    let lib = fbs_solve(&prob, &pen, &SolverConfig::new(1.0)).unwrap();
    for (got, want) in solution.iter().zip(lib.solution.iter()) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn solve_rejects_unknown_fields_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{
            "matrix": {"generate": {"kind": "gaussian", "m": 8, "n": 16}},
            "observation": {"synthesize": {"s_truth": 2}},
            "penalty": {"regularizer": "l1", "s": 2},
            "solver": "fbs",
            "rho": 0.1,
            "typo_field": 1
        }"#,
    )
    .unwrap();
    let out = sdiff(&["solve", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("typo_field"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn solve_missing_field_names_it() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{
            "matrix": {"generate": {"kind": "gaussian", "m": 8, "n": 16}},
            "observation": {"synthesize": {"s_truth": 2}},
            "penalty": {"regularizer": "l1", "s": 2},
            "solver": "fbs"
        }"#,
    )
    .unwrap();
    let out = sdiff(&["solve", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("rho"), "stderr: {}", stderr(&out));
}

#[test]
fn solve_desk_scale_recovers_synthetic_signal() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{
            "matrix": {"generate": {"kind": "gaussian", "m": 256, "n": 1024, "seed": 7}},
            "observation": {"synthesize": {"s_truth": 48, "seed": 9}},
            "penalty": {"regularizer": "l1", "s": 48},
            "solver": "fbs",
            "rho": 0.1,
            "warm_start": {"rho": 1e-6}
        }"#,
    )
    .unwrap();
    let out = sdiff(
        &["solve", "--config", "cfg.json", "--out", "res"],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let trace: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("res/trace.json")).unwrap())
            .unwrap();
    let rel_err = trace["rel_err"].as_f64().unwrap();
    assert!(rel_err <= 1e-4, "rel_err {rel_err}");
    assert_eq!(trace["seed"].as_u64(), Some(42));
}

#[test]
fn solve_nonconvergent_run_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    write_identity_dump(&dir.path().join("eye.bin"), 3);
    std::fs::write(dir.path().join("b.txt"), "5.0\n1.0\n2.0\n").unwrap();
    // One iteration with tol 0 cannot satisfy the stopping rule.
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{
            "matrix": {"load": "eye.bin"},
            "observation": {"load": "b.txt"},
            "penalty": {"regularizer": "l1", "s": 1},
            "solver": "fbs",
            "rho": 0.1,
            "tol": 0.0,
            "max_iter": 1
        }"#,
    )
    .unwrap();
    let out = sdiff(&["solve", "--config", "cfg.json"], dir.path());
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn bench_unknown_preset_lists_valid_names() {
    let dir = tempfile::tempdir().unwrap();
    let out = sdiff(&["bench", "--preset", "nope"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(
        err.contains("fig3_gaussian") && err.contains("table2"),
        "{err}"
    );
}

#[test]
fn bench_toy_reports_minima_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = sdiff(&["bench", "--preset", "toy", "--out", "o"], dir.path());
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    for label in [
        "sdiff_l1",
        "sdiff_l2",
        "sdiff_l1_minus_l2",
        "sdiff_l1_over_l2",
        "sdiff_mcp",
    ] {
        let line = text
            .lines()
            .find(|l| l.contains(label))
            .unwrap_or_else(|| panic!("missing {label} in: {text}"));
        assert!(
            line.contains("argmin t =  -0.00") || line.contains("argmin t =   0.00"),
            "{line}"
        );
    }
    assert!(dir.path().join("o/toy_curves.csv").exists());
}

#[test]
fn bench_custom_config_writes_artifacts_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("exp.json"),
        r#"{
            "id": "mini",
            "matrix": "gaussian_unit_columns",
            "m": 8,
            "n": 16,
            "s_truth": 1,
            "noise_scale": 0.0,
            "init": {"l1_admm": {"rho": 1e-6, "iters": null}},
            "solvers": [
                {"name": "sdiff_l1_fbs", "kind": {"sdiff_fbs": {"reg": "l1"}}, "rho": 0.1},
                {"name": "l1_admm", "kind": "l1_admm", "rho": 1e-6}
            ],
            "trials": 2,
            "master_seed": 1,
            "success_threshold": 1e-3
        }"#,
    )
    .unwrap();
    let run = |out: &str| {
        let o = sdiff(
            &["bench", "--config", "exp.json", "--out", out, "--seed", "5"],
            dir.path(),
        );
        assert!(o.status.success(), "stderr: {}", stderr(&o));
    };
    run("o1");
    run("o2");
    let a = std::fs::read(dir.path().join("o1/mini_trials.csv")).unwrap();
    let b = std::fs::read(dir.path().join("o2/mini_trials.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let header = String::from_utf8_lossy(&a);
    assert!(header.contains("# seed=5"));
    assert!(header.contains(
        "config_id,matrix_kind,M,N,s_truth,noise,solver,trial,rel_err,iterations,wall_ms,success"
    ));
}

#[test]
fn bench_solver_filter_restricts_roster() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("exp.json"),
        r#"{
            "id": "mini",
            "matrix": "gaussian_unit_columns",
            "m": 8,
            "n": 16,
            "s_truth": 1,
            "noise_scale": 0.0,
            "init": "zeros",
            "solvers": [
                {"name": "sdiff_l1_fbs", "kind": {"sdiff_fbs": {"reg": "l1"}}, "rho": 0.1},
                {"name": "l1_admm", "kind": "l1_admm", "rho": 1e-6}
            ],
            "trials": 1,
            "master_seed": 1
        }"#,
    )
    .unwrap();
    let out = sdiff(
        &[
            "bench", "--config", "exp.json", "--solver", "l1_admm", "--out", "o",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("l1_admm"));
    assert!(!text.contains("sdiff_l1_fbs"));
}

#[test]
fn prox_check_passes_and_fault_injection_fails() {
    let dir = tempfile::tempdir().unwrap();
    let ok = sdiff(&["prox-check", "--dims", "3", "--trials", "8"], dir.path());
    assert!(ok.status.success(), "stderr: {}", stderr(&ok));
    let broken = sdiff(
        &[
            "prox-check",
            "--dims",
            "3",
            "--trials",
            "8",
            "--inject-fault",
        ],
        dir.path(),
    );
    assert_eq!(broken.status.code(), Some(2));
}

#[test]
fn rho_bound_values_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = sdiff(&["rho-bound", "l1", "--beta", "2"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("2.000000"));

    let out = sdiff(
        &[
            "rho-bound",
            "ls-l1",
            "--atb",
            "1",
            "--a2",
            "1",
            "--c",
            "1",
            "--s",
            "1",
        ],
        dir.path(),
    );
    assert!(stdout(&out).contains("2.353553"));

    let out = sdiff(
        &["rho-bound", "l1l2", "--beta", "1", "--a", "1", "--s", "4"],
        dir.path(),
    );
    assert!(stdout(&out).contains("1.333333"));

    // a out of range: parameter error, exit 1.
    let out = sdiff(
        &["rho-bound", "l1l2", "--beta", "1", "--a", "1.5", "--s", "4"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn toy_rejects_bad_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = sdiff(&["toy", "--step", "0.5"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}
