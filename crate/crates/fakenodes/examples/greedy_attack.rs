//! Non-targeted greedy fake-node attack against a clean-trained GCN, with
//! the random-flip baseline for comparison, and the attack trace written to
//! CSV.
//!
//! ```bash
//! cargo run --release --example greedy_attack
//! ```

use fakenodes::data::{DatasetSpec, SyntheticSpec};
use fakenodes::harness::{run_nontargeted, AttackKind, ExperimentConfig};
use fakenodes::objective::{AttackGoal, Budget};
use fakenodes::{greedy_attack, AugmentedGraph, Result};

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
        fake_fraction: 0.20,
        budget_per_fake: 20,
        seeds: vec![0, 1, 2],
        ..ExperimentConfig::default()
    };

    let greedy = run_nontargeted(&cfg)?;
    let mut random_cfg = cfg.clone();
    random_cfg.attack = AttackKind::Random;
    let random = run_nontargeted(&random_cfg)?;

    println!("non-targeted attack, {} seeds, evasion:", cfg.seeds.len());
    println!("  clean accuracy : {:.4}", greedy.clean_mean());
    println!(
        "  random attack  : {:.4} +/- {:.4}",
        random.mean, random.stddev
    );
    println!(
        "  greedy attack  : {:.4} +/- {:.4}",
        greedy.mean, greedy.stddev
    );

    // Rerun one seed by hand to export its trace.
    let prep = fakenodes::harness::prepare(&cfg, 0)?;
    let m = (cfg.fake_fraction * prep.graph.num_nodes() as f64).ceil() as usize;
    let mut aug = AugmentedGraph::new(prep.graph.clone(), m);
    let mut rng = fakenodes::harness::derive_rng(0, fakenodes::harness::ROLE_FAKE_FEATURES);
    aug.randomize_fake_features(prep.graph.feature_density(), &mut rng);
    let goal = AttackGoal::non_targeted(prep.graph.labels());
    let budget = Budget::units(cfg.budget_per_fake * m);
    let (_, trace) = greedy_attack(aug, &prep.model, &goal, &budget)?;
    trace.write_csv(std::path::Path::new("greedy_trace.csv"))?;
    println!(
        "trace with {} steps written to greedy_trace.csv (J {:.1} -> {:.1})",
        trace.steps.len(),
        trace.steps.first().map(|s| s.j_before).unwrap_or(0.0),
        trace.steps.last().map(|s| s.j_after).unwrap_or(0.0)
    );
    Ok(())
}
