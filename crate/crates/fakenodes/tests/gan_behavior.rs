//! Behavior of the discriminator-guided attack: reduction to plain greedy,
//! the add/drop selection rule, the realism/strength trade-off, and the
//! detectability metric.

mod support;

use fakenodes::gan::{
    combined_objective, detectability_f1, greedy_gan_attack, Discriminator, GanConfig,
};
use fakenodes::gcn::GcnModel;
use fakenodes::graph::{AugmentedGraph, NormalizationMode};
use fakenodes::greedy::greedy_attack;
use fakenodes::objective::{AttackGoal, Budget};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn toy(seed: u64) -> (fakenodes::Graph, GcnModel, AttackGoal) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = support::random_graph(&mut rng, 9, 6, 3);
    let mut model = GcnModel::init(6, 4, 3, NormalizationMode::RowWise, seed).unwrap();
    model.w0.mapv_inplace(|v| v * 2.0);
    model.w1.mapv_inplace(|v| v * 2.0);
    let goal = AttackGoal::non_targeted(graph.labels());
    (graph, model, goal)
}

#[test]
fn c_zero_without_drops_reduces_to_greedy() {
    for seed in [1u64, 2, 3] {
        let (graph, model, goal) = toy(seed);
        let aug = AugmentedGraph::new(graph.clone(), 2);
        let budget = Budget::units(8);
        let (greedy_out, greedy_trace) =
            greedy_attack(aug.clone(), &model, &goal, &budget).unwrap();
        let cfg = GanConfig {
            c: 0.0,
            allow_drops: false,
            d_iters: 0,
            seed,
            ..GanConfig::default()
        };
        let (gan_out, _disc, gan_trace) =
            greedy_gan_attack(aug, &model, &goal, &budget, &cfg).unwrap();
        assert_eq!(greedy_out, gan_out, "seed {seed}: attacked graphs differ");
        assert_eq!(greedy_trace.steps.len(), gan_trace.steps.len());
        for (g, a) in greedy_trace.steps.iter().zip(&gan_trace.steps) {
            assert_eq!((g.block, g.row, g.col, g.action), (a.block, a.row, a.col, a.action));
            assert_eq!(g.grad, a.grad, "seed {seed}: gradient values differ");
        }
    }
}

#[test]
fn applied_action_dominates_alternative() {
    let (graph, model, goal) = toy(7);
    let n = graph.num_nodes();
    let mut aug = AugmentedGraph::new(graph.clone(), 2);
    // Pre-fill some entries so both adds and drops are available.
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    aug.randomize_fake_features(0.4, &mut rng);
    for v in 0..4 {
        aug.flip(
            fakenodes::FlipCoord::Edge { a: n, b: v },
            fakenodes::Direction::Add,
        )
        .unwrap();
    }
    let cfg = GanConfig {
        seed: 7,
        d_iters: 3,
        greedy_steps: 4,
        ..GanConfig::default()
    };
    let (_, _, trace) = greedy_gan_attack(aug, &model, &goal, &Budget::units(10), &cfg).unwrap();
    assert!(!trace.steps.is_empty());
    let mut saw_alternative = false;
    for step in &trace.steps {
        if let Some(alt) = step.alt_grad {
            saw_alternative = true;
            assert!(
                step.grad.abs() >= alt.abs(),
                "step {}: applied |{}| < alternative |{}|",
                step.t,
                step.grad,
                alt
            );
        } else {
            assert!(step.forced || !cfg.allow_drops);
        }
    }
    assert!(saw_alternative, "no step had both actions available");
}

#[test]
fn fresh_augmentation_forces_adds() {
    let (graph, model, goal) = toy(11);
    let aug = AugmentedGraph::new(graph, 2);
    let cfg = GanConfig {
        seed: 11,
        ..GanConfig::default()
    };
    let (_, _, trace) = greedy_gan_attack(aug, &model, &goal, &Budget::units(2), &cfg).unwrap();
    assert_eq!(trace.steps.len(), 2);
    for step in &trace.steps {
        assert_eq!(step.action, fakenodes::Direction::Add);
        assert!(step.forced, "empty drop set must force the add");
    }
}

#[test]
fn binary_integrity_through_add_drop_sequences() {
    let (graph, model, goal) = toy(13);
    let mut aug = AugmentedGraph::new(graph.clone(), 3);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    aug.randomize_fake_features(0.5, &mut rng);
    aug.add_random_fake_edges(6, &mut rng);
    let base_copy = graph;
    let cfg = GanConfig {
        seed: 13,
        greedy_steps: 5,
        d_iters: 2,
        ..GanConfig::default()
    };
    let (out, _, trace) =
        greedy_gan_attack(aug, &model, &goal, &Budget::units(20), &cfg).unwrap();
    assert_eq!(trace.steps.len(), 20);
    assert_eq!(out.base(), &base_copy);
    for u in 0..out.num_fake() {
        assert!(!out.c_entry(u, u));
        for w in 0..out.num_fake() {
            assert_eq!(out.c_entry(u, w), out.c_entry(w, u));
        }
    }
}

#[test]
fn large_c_prioritizes_fooling_the_discriminator() {
    // Paired runs on identical seeds: a huge discriminator weight must end
    // with more real-looking fakes (lower fooling loss), and the attack
    // objective it reaches must not beat the unconstrained run.
    let mut j_gain_free = 0.0;
    let mut j_gain_constrained = 0.0;
    let mut fool_free = 0.0;
    let mut fool_constrained = 0.0;
    for seed in [21u64, 22, 23] {
        let (graph, model, goal) = toy(seed);
        let mut aug = AugmentedGraph::new(graph.clone(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        aug.randomize_fake_features(0.4, &mut rng);
        let budget = Budget::units(12);
        let run = |c: f64| {
            let cfg = GanConfig {
                c,
                seed,
                greedy_steps: 6,
                d_iters: 5,
                ..GanConfig::default()
            };
            let (out, disc, trace) =
                greedy_gan_attack(aug.clone(), &model, &goal, &budget, &cfg).unwrap();
            let j0 = trace.steps.first().unwrap().j_before;
            let j1 = trace.steps.last().unwrap().j_after;
            // Fooling loss of the final fakes under the final discriminator.
            let x_fake = out.x_fake_matrix();
            let probs = disc.probs(&x_fake.view());
            let fool: f64 = probs
                .column(fakenodes::gan::CLASS_REAL)
                .iter()
                .map(|&p| -p.max(1e-12).ln())
                .sum();
            (j1 - j0, fool)
        };
        let (jg_free, fl_free) = run(0.0);
        let (jg_con, fl_con) = run(1e4);
        j_gain_free += jg_free;
        j_gain_constrained += jg_con;
        fool_free += fl_free;
        fool_constrained += fl_con;
    }
    assert!(
        fool_constrained < fool_free,
        "large c should leave fakes looking more real: {fool_constrained} vs {fool_free}"
    );
    assert!(
        j_gain_constrained <= j_gain_free + 1e-9,
        "realism constraint should not strengthen the attack: {j_gain_constrained} vs {j_gain_free}"
    );
}

#[test]
fn combined_objective_composes_j_and_loss() {
    let (graph, model, goal) = toy(31);
    let mut aug = AugmentedGraph::new(graph.clone(), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    aug.randomize_fake_features(0.3, &mut rng);
    let disc = Discriminator::init(graph.num_features(), 8, 3).unwrap();

    // c = 0 reduces to J exactly.
    let j = {
        let asm = fakenodes::assemble(&aug).unwrap();
        let logits = fakenodes::forward(&model, &asm).unwrap().logits;
        goal.value(&logits.view()).unwrap()
    };
    assert_eq!(combined_objective(&aug, &model, &disc, &goal, 0.0).unwrap(), j);

    // Hand-composed value for c > 0.
    let asm = fakenodes::assemble(&aug).unwrap();
    let probs = disc.probs(&asm.features().view());
    let fool: f64 = probs
        .column(fakenodes::gan::CLASS_REAL)
        .iter()
        .map(|&p| -p.max(1e-12).ln())
        .sum();
    let c = 2.5;
    let phi = combined_objective(&aug, &model, &disc, &goal, c).unwrap();
    assert!((phi - (j - c * fool)).abs() < 1e-9);
    // Monotone in the loss term.
    let phi_bigger_c = combined_objective(&aug, &model, &disc, &goal, 5.0).unwrap();
    assert!(phi_bigger_c <= phi);
}

#[test]
fn detectability_separates_real_from_generator_fakes() {
    // Separable toy: real rows have a strong band structure, random rows do
    // not. Fakes drawn from the random generator should be caught.
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let n = 60;
    let d = 16;
    let mut real = Array2::zeros((n, d));
    for i in 0..n {
        for j in 0..5 {
            if rng.random::<f64>() < 0.9 {
                real[[i, j]] = 1.0;
            }
        }
    }
    let density = real.iter().filter(|&&v| v != 0.0).count() as f64 / (n * d) as f64;
    let mut fakes = Array2::zeros((20, d));
    for i in 0..20 {
        for j in 0..d {
            if rng.random::<f64>() < density {
                fakes[[i, j]] = 1.0;
            }
        }
    }
    let f1_generated = detectability_f1(&fakes.view(), &real.view(), 1).unwrap();
    assert!(
        f1_generated > 0.9,
        "generator fakes should be detectable, F1 = {f1_generated}"
    );

    // Fakes copied from real rows are indistinguishable.
    let copied = real.slice(ndarray::s![..20, ..]).to_owned();
    let f1_copied = detectability_f1(&copied.view(), &real.view(), 1).unwrap();
    assert!(
        f1_copied <= 0.5,
        "copied real rows should evade detection, F1 = {f1_copied}"
    );
    assert!(f1_copied < f1_generated);
}

#[test]
fn detectability_requires_fakes() {
    let real = Array2::zeros((4, 3));
    let empty = Array2::zeros((0, 3));
    assert!(detectability_f1(&empty.view(), &real.view(), 0).is_err());
}
