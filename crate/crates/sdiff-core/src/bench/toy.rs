//! The six-dimensional toy landscape: penalty values along the solution
//! line x(t) = (t, t, t, 15-3t, 20-4t, 4t-40) of a 5x6 system.
//!
//! The sparsest solution (three nonzeros) sits at t = 0; plain l1 prefers
//! the four-sparse point t = 5, while every s-difference variant with s = 3
//! bottoms out at t = 0.

use serde::{Deserialize, Serialize};

use crate::regularizer::Regularizer;
use crate::vector::{truncate, DenseVector};

/// One penalty curve over the t grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyCurve {
    pub label: String,
    /// True for the s-difference rows (bottom row of the study).
    pub s_difference: bool,
    pub values: Vec<f64>,
    pub argmin_t: f64,
    pub min_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToySweep {
    pub t: Vec<f64>,
    pub s: usize,
    pub curves: Vec<ToyCurve>,
}

/// The solution family of the toy system.
pub fn toy_solution(t: f64) -> DenseVector {
    DenseVector::from_raw(vec![
        t,
        t,
        t,
        15.0 - 3.0 * t,
        20.0 - 4.0 * t,
        4.0 * t - 40.0,
    ])
}

/// Uniform grid over [-2, 12].
pub fn toy_grid(step: f64) -> Vec<f64> {
    assert!(
        step > 0.0 && step <= 0.05 + 1e-12,
        "grid step must be in (0, 0.05]"
    );
    let count = ((12.0 - (-2.0)) / step).round() as usize;
    (0..=count).map(|i| -2.0 + step * i as f64).collect()
}

/// Evaluates the ten penalty curves of the study with sparsity level s = 3.
pub fn run_toy_example(t_grid: &[f64]) -> ToySweep {
    run_toy_example_with_s(t_grid, 3)
}

type Curve = Box<dyn Fn(&DenseVector) -> f64>;

/// Same sweep with an adjustable sparsity level for the difference rows.
pub fn run_toy_example_with_s(t_grid: &[f64], s: usize) -> ToySweep {
    assert!((1..=6).contains(&s), "s must lie in 1..=6");
    let mcp = Regularizer::Mcp { theta: 15.0 };
    let l12 = Regularizer::L1MinusL2 { a: 1.0 };

    let plain: Vec<(&str, Curve)> = vec![
        ("l1", Box::new(|x: &DenseVector| x.norm_l1())),
        (
            "lhalf",
            Box::new(|x: &DenseVector| x.iter().map(|v| v.abs().sqrt()).sum()),
        ),
        ("l1_minus_l2", Box::new(move |x: &DenseVector| l12.eval(x))),
        ("l1_over_l2", Box::new(|x: &DenseVector| ratio(x))),
        ("mcp", Box::new(move |x: &DenseVector| mcp.eval(x))),
    ];
    let diff: Vec<(&str, Curve)> = vec![
        ("sdiff_l1", sdiff_of(move |x| x.norm_l1(), s)),
        ("sdiff_l2", sdiff_of(move |x| x.norm_l2(), s)),
        ("sdiff_l1_minus_l2", sdiff_of(move |x| l12.eval(x), s)),
        ("sdiff_l1_over_l2", sdiff_of(ratio, s)),
        ("sdiff_mcp", sdiff_of(move |x| mcp.eval(x), s)),
    ];

    let mut curves = Vec::with_capacity(10);
    for (label, f) in plain.iter() {
        curves.push(sample_curve(label, false, f, t_grid));
    }
    for (label, f) in diff.iter() {
        curves.push(sample_curve(label, true, f, t_grid));
    }
    ToySweep {
        t: t_grid.to_vec(),
        s,
        curves,
    }
}

fn sample_curve(
    label: &str,
    s_difference: bool,
    f: &dyn Fn(&DenseVector) -> f64,
    t_grid: &[f64],
) -> ToyCurve {
    let values: Vec<f64> = t_grid.iter().map(|&t| f(&toy_solution(t))).collect();
    let (argmin, min_value) =
        values
            .iter()
            .enumerate()
            .fold((0usize, f64::INFINITY), |(bi, bv), (i, &v)| {
                if v < bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            });
    ToyCurve {
        label: label.to_string(),
        s_difference,
        values,
        argmin_t: t_grid[argmin],
        min_value,
    }
}

fn ratio(x: &DenseVector) -> f64 {
    let norm = x.norm_l2();
    if norm == 0.0 {
        0.0
    } else {
        x.norm_l1() / norm
    }
}

fn sdiff_of(f: impl Fn(&DenseVector) -> f64 + 'static, s: usize) -> Curve {
    Box::new(move |x: &DenseVector| {
        let xs = truncate(x, s).expect("s in 1..=6");
        f(x) - f(&xs)
    })
}
