//! Host-side tests of the JSON API behind the wasm exports.

use sdiff_wasm::{prox_explore_json, recovery_demo_json, toy_curves_json};
use serde_json::Value;

#[test]
fn toy_curves_minimum_structure() {
    let json = toy_curves_json(0.02, 3).unwrap();
    let v: Value = serde_json::from_str(&json).unwrap();
    let curves = v["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 10);
    for c in curves {
        if c["s_difference"].as_bool().unwrap() {
            assert!(
                c["argmin_t"].as_f64().unwrap().abs() < 0.011,
                "{}: argmin {}",
                c["label"],
                c["argmin_t"]
            );
        }
    }
    let l1 = curves.iter().find(|c| c["label"] == "l1").unwrap();
    assert!((l1["argmin_t"].as_f64().unwrap() - 5.0).abs() < 0.011);
}

#[test]
fn toy_curves_rejects_bad_args() {
    assert!(toy_curves_json(0.5, 3).is_err());
    assert!(toy_curves_json(0.01, 0).is_err());
    assert!(toy_curves_json(0.01, 7).is_err());
}

#[test]
fn prox_explore_shrinks_tail_and_keeps_top() {
    let json =
        prox_explore_json(r#"{"regularizer": "l1", "s": 1, "lambda": 1.0, "y": [3.0, -1.0, 0.5]}"#)
            .unwrap();
    let v: Value = serde_json::from_str(&json).unwrap();
    let x: Vec<f64> = v["x"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_f64().unwrap())
        .collect();
    assert_eq!(x, vec![3.0, 0.0, 0.0]);
    assert_eq!(v["top_indices"].as_array().unwrap()[0], 0);
    // The tail curve is the soft-shrinkage map: flat zero inside [-1, 1].
    let ts: Vec<f64> = v["curve_t"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_f64().unwrap())
        .collect();
    let vs: Vec<f64> = v["curve_v"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_f64().unwrap())
        .collect();
    for (t, val) in ts.iter().zip(&vs) {
        if t.abs() < 0.99 {
            assert_eq!(*val, 0.0, "t={t}");
        }
        if *t > 1.01 {
            assert!((val - (t - 1.0)).abs() < 1e-9, "t={t} v={val}");
        }
    }
}

#[test]
fn prox_explore_rejects_unknown_fields() {
    let err =
        prox_explore_json(r#"{"regularizer": "l1", "s": 1, "lambda": 1.0, "y": [1.0], "oops": 2}"#)
            .unwrap_err();
    assert!(err.contains("oops"), "{err}");
}

#[test]
fn prox_explore_reports_unsupported_closed_form() {
    let err = prox_explore_json(
        r#"{"regularizer": {"scad": {"theta": 3.7}}, "s": 1, "lambda": 1.0, "y": [1.0, 2.0]}"#,
    )
    .unwrap_err();
    assert!(err.contains("closed-form"), "{err}");
}

#[test]
fn recovery_demo_recovers_and_beats_baseline() {
    let json = recovery_demo_json(r#"{"m": 32, "n": 128, "s_truth": 5, "seed": 7}"#).unwrap();
    let v: Value = serde_json::from_str(&json).unwrap();
    let fbs_err = v["sdiff_fbs"]["rel_err"].as_f64().unwrap();
    assert!(fbs_err < 1e-3, "fbs rel err {fbs_err}");
    assert_eq!(v["truth"].as_array().unwrap().len(), 128);
    assert!(!v["sdiff_fbs"]["log_rel_err_curve"]
        .as_array()
        .unwrap()
        .is_empty());
    assert!(v["l1_admm"]["rel_err"].as_f64().unwrap() >= 0.0);
}

#[test]
fn recovery_demo_validates_sizes() {
    assert!(recovery_demo_json(r#"{"m": 600, "n": 1200}"#).is_err());
    assert!(recovery_demo_json(r#"{"m": 64, "n": 32}"#).is_err());
    assert!(recovery_demo_json(r#"{"m": 32, "n": 128, "s_truth": 0}"#).is_err());
}

#[test]
fn recovery_demo_is_deterministic() {
    let a = recovery_demo_json(r#"{"seed": 11}"#).unwrap();
    let b = recovery_demo_json(r#"{"seed": 11}"#).unwrap();
    assert_eq!(a, b);
}
