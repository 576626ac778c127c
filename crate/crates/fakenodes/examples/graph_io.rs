//! The on-disk formats: native graph directories, attacked-graph round
//! trips, content digests, and model serialization.
//!
//! ```bash
//! cargo run --release --example graph_io
//! ```

use fakenodes::data::{
    augmented_digest, generate, load_augmented, save_augmented, SyntheticSpec,
};
use fakenodes::gcn::GcnModel;
use fakenodes::graph::{AugmentedGraph, Direction, FlipCoord, NormalizationMode};
use fakenodes::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let graph = generate(&SyntheticSpec::default(), 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let graph = graph.with_split(0.2, &mut rng)?;
    let n = graph.num_nodes();

    // Build a small augmentation by hand.
    let mut aug = AugmentedGraph::new(graph, 2);
    aug.flip(FlipCoord::Edge { a: n, b: 0 }, Direction::Add)?;
    aug.flip(FlipCoord::Edge { a: n, b: n + 1 }, Direction::Add)?;
    aug.flip(FlipCoord::Feature { node: n + 1, dim: 4 }, Direction::Add)?;
    aug.set_fake_label(0, Some(1))?;

    let dir = std::env::temp_dir().join("fakenodes-io-example");
    save_augmented(&aug, &dir)?;
    println!("augmented graph written to {}", dir.display());
    for name in fakenodes::data::native_file_names(true) {
        let len = std::fs::metadata(dir.join(name)).map(|m| m.len()).unwrap_or(0);
        println!("  {name:<20} {len:>6} bytes");
    }

    let back = load_augmented(&dir)?;
    assert_eq!(back, aug);
    println!("round trip: loaded graph is identical");
    println!("content digest: {}", &augmented_digest(&aug)[..16]);

    // Models serialize to a stable text dump.
    let model = GcnModel::init(
        aug.base().num_features(),
        16,
        aug.base().num_classes(),
        NormalizationMode::Symmetric,
        42,
    )?;
    let model_path = dir.join("model.txt");
    model.save(&model_path)?;
    let restored = GcnModel::load(&model_path)?;
    assert_eq!(model, restored);
    println!("model round trip through {} ok", model_path.display());
    Ok(())
}
