//! Analytic input gradients against the dense finite-difference oracle.

mod support;

use fakenodes::gcn::GcnModel;
use fakenodes::graph::{AugmentedGraph, NormalizationMode};
use fakenodes::objective::AttackGoal;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn forward_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for case in 0..20 {
        let graph = support::random_graph(&mut rng, 5, 4, 3);
        let aug = support::random_aug(&mut rng, &graph, 2, 0.3);
        for mode in [NormalizationMode::RowWise, NormalizationMode::Symmetric] {
            let model = GcnModel::init(4, 3, 3, mode, 100 + case).unwrap();
            let asm = fakenodes::assemble(&aug).unwrap();
            let trace = fakenodes::forward(&model, &asm).unwrap();
            let (a, x) = support::dense_blocks(&aug);
            let expect = support::dense_logits(&model, &a.view(), &x.view());
            for (got, want) in trace.logits.iter().zip(expect.iter()) {
                assert!(
                    (got - want).abs() < 1e-10,
                    "case {case}: logits {got} vs oracle {want}"
                );
            }
        }
    }
}

#[test]
fn normalized_adjacency_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    for _ in 0..20 {
        let graph = support::random_graph(&mut rng, 7, 3, 2);
        let aug = support::random_aug(&mut rng, &graph, 2, 0.3);
        let asm = fakenodes::assemble(&aug).unwrap();
        let (a, _) = support::dense_blocks(&aug);
        for mode in [NormalizationMode::RowWise, NormalizationMode::Symmetric] {
            let got = fakenodes::normalize(&asm, mode);
            let want = support::dense_normalize(&a.view(), mode);
            for (g, w) in got.iter().zip(want.iter()) {
                assert!((g - w).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn gradients_match_finite_differences() {
    // A slice of the full acceptance sweep, split across modes and goals.
    let mut worst: f64 = 0.0;
    for seed in 0..10u64 {
        for (k, mode) in [NormalizationMode::RowWise, NormalizationMode::Symmetric]
            .into_iter()
            .enumerate()
        {
            for targeted in [false, true] {
                let err = support::gradient_check_case(
                    1000 + seed * 4 + k as u64 * 2 + targeted as u64,
                    mode,
                    targeted,
                );
                worst = worst.max(err);
            }
        }
    }
    assert!(
        worst < 1e-4,
        "worst relative error {worst} exceeds 1e-4"
    );
}

#[test]
fn isolated_fake_node_has_zero_feature_gradient() {
    // A fake node with no edges reaches no real node's logits, so the
    // objective cannot depend on its features.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let graph = support::random_graph(&mut rng, 6, 4, 2);
    let aug = AugmentedGraph::new(graph.clone(), 2);
    let model = GcnModel::init(4, 3, 2, NormalizationMode::RowWise, 4).unwrap();
    let goal = AttackGoal::non_targeted(graph.labels());
    let grads = fakenodes::input_gradients(&model, &aug, &goal).unwrap();
    let (a, x) = support::dense_blocks(&aug);
    for u in 0..2 {
        for j in 0..4 {
            assert_eq!(grads.x[[u, j]], 0.0);
            let fd = support::fd_feature_grad(&model, &a, &x, &goal, 6 + u, j, 1e-4);
            assert!(fd.abs() < 1e-10, "oracle disagrees: {fd}");
        }
    }
}

#[test]
fn objective_values_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let graph = support::random_graph(&mut rng, 8, 3, 3);
        let model = GcnModel::init(3, 4, 3, NormalizationMode::Symmetric, 17).unwrap();
        let trace = fakenodes::gcn::forward_graph(&model, &graph).unwrap();
        for targeted in [false, true] {
            let goal = support::random_goal(&mut rng, &graph, targeted);
            let got = goal.value(&trace.logits.view()).unwrap();
            let want = support::brute_objective(&goal, &trace.logits.view());
            assert!((got - want).abs() < 1e-12);
        }
    }
}
