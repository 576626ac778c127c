//! A look at the raw attack surface: the exact objective gradients over
//! every candidate fake edge and fake feature, which the greedy attack
//! maximizes one flip at a time.
//!
//! ```bash
//! cargo run --release --example gradient_inspection
//! ```

use fakenodes::data::{generate, SyntheticSpec};
use fakenodes::gcn::{train, TrainConfig};
use fakenodes::graph::{AugmentedGraph, NormalizationMode};
use fakenodes::objective::AttackGoal;
use fakenodes::{input_gradients, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let spec = SyntheticSpec {
        blocks: 3,
        per_block: 20,
        p_intra: 0.15,
        p_inter: 0.02,
        dim: 16,
        feature_bias: 0.4,
    };
    let graph = generate(&spec, 11)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let graph = graph.with_split(0.2, &mut rng)?;
    let labeled: Vec<(usize, usize)> = graph
        .train_nodes()
        .into_iter()
        .map(|i| (i, graph.labels()[i]))
        .collect();
    let model = train(
        &graph.as_assembled(),
        &labeled,
        graph.num_classes(),
        NormalizationMode::RowWise,
        &TrainConfig::default(),
    )?;

    let mut aug = AugmentedGraph::new(graph.clone(), 2);
    aug.randomize_fake_features(graph.feature_density(), &mut rng);
    let goal = AttackGoal::non_targeted(graph.labels());
    let grads = input_gradients(&model, &aug, &goal)?;

    println!(
        "gradient blocks: B {}x{}, C {}x{}, X_fake {}x{}",
        grads.b.nrows(),
        grads.b.ncols(),
        grads.c.nrows(),
        grads.c.ncols(),
        grads.x.nrows(),
        grads.x.ncols()
    );

    let mut edges: Vec<(usize, usize, f64)> = grads
        .b
        .indexed_iter()
        .map(|((u, v), &g)| (u, v, g))
        .collect();
    edges.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap());
    println!("top 5 fake-to-real edge candidates (fake, real, dJ/de):");
    for (u, v, g) in edges.iter().take(5) {
        println!("  fake {u} -> node {v:>3}   {g:+.5}");
    }

    let mut feats: Vec<(usize, usize, f64)> = grads
        .x
        .indexed_iter()
        .filter(|((u, j), _)| !aug.x_fake_entry(*u, *j))
        .map(|((u, j), &g)| (u, j, g))
        .collect();
    feats.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap());
    println!("top 5 fake feature candidates (fake, dim, dJ/dx):");
    for (u, j, g) in feats.iter().take(5) {
        println!("  fake {u} dim {j:>3}       {g:+.5}");
    }
    Ok(())
}
