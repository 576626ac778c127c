//! Sweep the fraction of fake nodes that carry labels, under poisoning
//! evaluation (fake labels only matter when the model retrains on them).
//!
//! ```bash
//! cargo run --release --example label_rate_sweep
//! ```

use fakenodes::data::{DatasetSpec, SyntheticSpec};
use fakenodes::harness::{sweep, ExperimentConfig, SweepAxis};
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
        budget_per_fake: 20,
        seeds: vec![0, 1, 2, 3, 4],
        ..ExperimentConfig::default()
    };
    // The sweep forces poisoning mode for this axis.
    let points = sweep(&cfg, &SweepAxis::default_label_rate())?;
    println!("fake label rate   poisoned accuracy (mean +/- std)");
    for p in &points {
        println!(
            "   {:>5.1}%            {:.4} +/- {:.4}",
            p.axis_value * 100.0,
            p.record.mean,
            p.record.stddev
        );
    }
    Ok(())
}
