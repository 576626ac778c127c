//! Row-wise vs symmetric adjacency normalization under the same attack
//! pipeline with paired seeds, in both evaluation modes.
//!
//! ```bash
//! cargo run --release --example normalization_comparison
//! ```

use fakenodes::data::{DatasetSpec, SyntheticSpec};
use fakenodes::harness::{compare_normalizations, EvalMode, ExperimentConfig};
use fakenodes::Result;

fn main() -> Result<()> {
    let base = ExperimentConfig {
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
    println!("mode        clean     evasion   poisoned");
    for eval_mode in [EvalMode::Evasion, EvalMode::Poisoning] {
        let mut cfg = base.clone();
        cfg.eval_mode = eval_mode;
        let (row, sym) = compare_normalizations(&cfg)?;
        if eval_mode == EvalMode::Evasion {
            println!(
                "rowwise     {:.4}    {:.4}    -",
                row.clean_mean(),
                row.mean
            );
            println!(
                "symmetric   {:.4}    {:.4}    -",
                sym.clean_mean(),
                sym.mean
            );
        } else {
            println!(
                "rowwise     {:.4}    -         {:.4}",
                row.clean_mean(),
                row.mean
            );
            println!(
                "symmetric   {:.4}    -         {:.4}",
                sym.clean_mean(),
                sym.mean
            );
        }
    }
    Ok(())
}
