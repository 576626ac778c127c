//! Which lever matters more, fake edges or fake features? Run the greedy
//! attack restricted to each from the same random initialization and
//! compare, with per-step accuracy curves.
//!
//! ```bash
//! cargo run --release --example features_vs_edges
//! ```

use fakenodes::data::{DatasetSpec, SyntheticSpec};
use fakenodes::harness::{ablate_features_vs_edges, write_plot_csv, ExperimentConfig};
use fakenodes::Result;
use std::path::Path;

fn main() -> Result<()> {
    let cfg = ExperimentConfig {
        dataset: DatasetSpec::synthetic(SyntheticSpec {
            blocks: 3,
            per_block: 40,
            p_intra: 0.08,
            p_inter: 0.01,
            dim: 24,
            feature_bias: 0.35,
        }),
        budget_per_fake: 16,
        seeds: vec![0, 1, 2],
        init_edges_per_fake: 4, // arms start from a shared random graph state
        ..ExperimentConfig::default()
    };
    let arms = ablate_features_vs_edges(&cfg)?;
    println!("arm             final accuracy (mean +/- std)");
    for arm in &arms {
        println!(
            "{:<15} {:.4} +/- {:.4}",
            arm.label, arm.record.mean, arm.record.stddev
        );
        let path = format!("curve_{}.csv", arm.label);
        write_plot_csv(Path::new(&path), &arm.curve)?;
        println!("                per-step curve written to {path}");
    }
    Ok(())
}
