//! Structural properties of the closed-form proximal operators on seeded
//! random instances. The heavyweight oracle-dominance suite lives in the
//! acceptance tests.

use rand::Rng;
use rand_distr::StandardNormal;
use sdiff_core::prox::{prox_l1, prox_l1_minus_al2, prox_l2, prox_l2sq, prox_lsp, prox_mcp};
use sdiff_core::rng::stream_rng;
use sdiff_core::vector::top_s_split;
use sdiff_core::{prox_sdiff, DenseVector, ProxProblem, Regularizer, SDiffPenalty};

fn random_vector(rng: &mut impl Rng, n: usize) -> DenseVector {
    DenseVector::new(
        (0..n)
            .map(|_| 2.0 * rng.sample::<f64, _>(StandardNormal))
            .collect(),
    )
    .unwrap()
}

fn closed_form_kinds(rng: &mut impl Rng) -> Vec<Regularizer> {
    let lambda_free: f64 = rng.random_range(0.01..2.0);
    vec![
        Regularizer::L1,
        Regularizer::L2Squared,
        Regularizer::L2,
        Regularizer::L1MinusL2 {
            a: rng.random_range(0.05..=1.0),
        },
        Regularizer::Lsp {
            theta: rng.random_range(0.1..2.0),
        },
        // The firm-threshold formula is exact in the theta > lambda regime.
        Regularizer::Mcp {
            theta: lambda_free + rng.random_range(0.05..2.0),
        },
    ]
}

#[test]
fn zero_anchor_maps_to_zero_and_nonzero_stays_nonzero() {
    let mut rng = stream_rng(201, &[]);
    for trial in 0..500 {
        let n = rng.random_range(1..=6);
        let s = rng.random_range(1..=n);
        let lambda = rng.random_range(0.01..2.0);
        for reg in closed_form_kinds(&mut rng) {
            let pen = SDiffPenalty::new(reg, s).unwrap();
            let zero = ProxProblem::new(pen, lambda, DenseVector::zeros(n)).unwrap();
            assert_eq!(
                prox_sdiff(&zero).unwrap().as_slice(),
                vec![0.0; n].as_slice()
            );

            let mut y = random_vector(&mut rng, n);
            while y.norm_l0() == 0 {
                y = random_vector(&mut rng, n);
            }
            let p = ProxProblem::new(pen, lambda, y).unwrap();
            let x = prox_sdiff(&p).unwrap();
            assert!(
                x.norm_l0() > 0,
                "trial {trial}: {reg:?} mapped nonzero y to zero"
            );
        }
    }
}

#[test]
fn sign_consistency_and_magnitude_ordering() {
    let mut rng = stream_rng(202, &[]);
    for _ in 0..400 {
        let n = rng.random_range(2..=6);
        let s = rng.random_range(1..=n);
        let lambda = rng.random_range(0.01..2.0);
        for reg in closed_form_kinds(&mut rng) {
            let pen = SDiffPenalty::new(reg, s).unwrap();
            let y = random_vector(&mut rng, n);
            let p = ProxProblem::new(pen, lambda, y.clone()).unwrap();
            let x = prox_sdiff(&p).unwrap();
            for i in 0..n {
                assert!(x[i] * y[i] >= 0.0, "{reg:?}: sign flip at {i}");
            }
            for i in 0..n {
                for j in 0..n {
                    if y[i].abs() > y[j].abs() {
                        assert!(
                            x[i].abs() >= x[j].abs() - 1e-12,
                            "{reg:?}: |y_{i}| > |y_{j}| but |x_{i}| = {} < |x_{j}| = {}",
                            x[i].abs(),
                            x[j].abs()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn separable_operators_anchor_the_top_block_exactly() {
    let mut rng = stream_rng(203, &[]);
    for _ in 0..400 {
        let n = rng.random_range(2..=6);
        let s = rng.random_range(1..=n);
        let lambda = rng.random_range(0.01..2.0);
        let y = random_vector(&mut rng, n);
        let split = top_s_split(&y, s).unwrap();
        let outs = [
            prox_l1(s, lambda, &y),
            prox_l2sq(s, lambda, &y),
            prox_mcp(lambda + 0.5, s, lambda, &y),
            prox_lsp(0.7, s, lambda, &y),
        ];
        for x in &outs {
            for &i in split.top_indices() {
                assert_eq!(x[i], y[i]);
            }
        }
    }
}

#[test]
fn a_zero_reduction_is_bitwise_l1() {
    let mut rng = stream_rng(204, &[]);
    for _ in 0..500 {
        let n = rng.random_range(1..=8);
        let s = rng.random_range(1..=n);
        let lambda = rng.random_range(0.0..2.0);
        let y = random_vector(&mut rng, n);
        let reduced = prox_l1_minus_al2(0.0, s, lambda, &y).unwrap();
        let direct = prox_l1(s, lambda, &y);
        assert_eq!(reduced.as_slice(), direct.as_slice());
    }
}

#[test]
fn s_sparse_anchors_are_fixed_points() {
    let mut rng = stream_rng(205, &[]);
    for _ in 0..300 {
        let n = rng.random_range(2..=6);
        let s = rng.random_range(1..n);
        let lambda = rng.random_range(0.01..2.0);
        // Build an s-sparse anchor.
        let mut y = vec![0.0; n];
        for slot in y.iter_mut().take(s) {
            *slot = 3.0 + rng.random_range(0.0..2.0);
        }
        let y = DenseVector::new(y).unwrap();
        assert_eq!(prox_l1(s, lambda, &y).as_slice(), y.as_slice());
        assert_eq!(prox_l2sq(s, lambda, &y).as_slice(), y.as_slice());
        assert_eq!(prox_l2(s, lambda, &y).as_slice(), y.as_slice());
        assert_eq!(
            prox_l1_minus_al2(1.0, s, lambda, &y).unwrap().as_slice(),
            y.as_slice()
        );
        assert_eq!(
            prox_mcp(lambda + 1.0, s, lambda, &y).as_slice(),
            y.as_slice()
        );
        assert_eq!(prox_lsp(0.7, s, lambda, &y).as_slice(), y.as_slice());
    }
}

/// The LSP scalar map agrees with a dense 1-D grid + local refinement.
#[test]
fn lsp_scalar_map_matches_grid_oracle() {
    let mut rng = stream_rng(206, &[]);
    for _ in 0..100 {
        let theta = rng.random_range(0.1..2.0);
        let lambda = rng.random_range(0.01..1.5);
        let b: f64 = rng.random_range(0.0..4.0);
        let y = DenseVector::new(vec![10.0, b]).unwrap();
        let x = prox_lsp(theta, 1, lambda, &y);
        let objective = |t: f64| (t - b).powi(2) / (2.0 * lambda) + (1.0 + t / theta).ln();
        let mut best = 0.0f64;
        let mut best_val = objective(0.0);
        let steps = 200_000;
        for i in 0..=steps {
            let t = b * i as f64 / steps as f64;
            let v = objective(t);
            if v < best_val {
                best_val = v;
                best = t;
            }
        }
        assert!(
            objective(x[1]) <= best_val + 1e-9,
            "lsp scalar: op {} (E={}) vs grid {} (E={best_val})",
            x[1],
            objective(x[1]),
            best
        );
    }
}
