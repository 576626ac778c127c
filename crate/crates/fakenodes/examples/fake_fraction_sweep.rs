//! Sweep the number of fake nodes (2.5% to 20% of the real nodes) with
//! paired seeds and write plot data.
//!
//! ```bash
//! cargo run --release --example fake_fraction_sweep
//! ```

use fakenodes::data::{DatasetSpec, SyntheticSpec};
use fakenodes::harness::{sweep, CurvePoint, ExperimentConfig, SweepAxis};
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
    let points = sweep(&cfg, &SweepAxis::default_fake_fraction())?;
    println!("fake fraction   attacked accuracy (mean +/- std over {} seeds)", cfg.seeds.len());
    let mut curve = Vec::new();
    for p in &points {
        println!(
            "   {:>5.1}%          {:.4} +/- {:.4}",
            p.axis_value * 100.0,
            p.record.mean,
            p.record.stddev
        );
        curve.push(CurvePoint {
            x: p.axis_value,
            mean: p.record.mean,
            stddev: p.record.stddev,
        });
    }
    fakenodes::harness::write_plot_csv(std::path::Path::new("fake_fraction.csv"), &curve)?;
    println!("plot data written to fake_fraction.csv");
    Ok(())
}
