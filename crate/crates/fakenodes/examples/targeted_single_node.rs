//! Single-victim targeted attack: three fake nodes labeled with the target
//! class, greedy flips until the victim's prediction gives in, sampled over
//! many (victim, target) pairs.
//!
//! ```bash
//! cargo run --release --example targeted_single_node
//! ```

use fakenodes::data::{DatasetSpec, SyntheticSpec};
use fakenodes::harness::{run_targeted_single, ExperimentConfig, GoalKind};
use fakenodes::Result;

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
        goal: GoalKind::TargetedSingle {
            node: None,  // sample victims
            class: None, // sample wrong-class targets
        },
        budget_per_fake: 24,
        seeds: vec![0, 1, 2, 4, 5],
        single_pairs_per_seed: 10,
        ..ExperimentConfig::default()
    };
    let report = run_targeted_single(&cfg)?;
    println!(
        "single-node targeted attack, {} (victim, target) pairs:",
        report.pairs
    );
    println!(
        "  success rate: {:.4} (clean baseline {:.4})",
        report.record.mean,
        report.record.clean_mean()
    );
    println!(
        "  resources per fake node: {:.1} edges, {:.1} features",
        report.mean_edges_per_fake, report.mean_features_per_fake
    );
    Ok(())
}
