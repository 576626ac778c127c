//! Scratch probe: full-budget greedy run at citation-network scale.
//! (Temporary development aid.)

use fakenodes::data::{DatasetSpec, SyntheticSpec};
use fakenodes::gcn::TrainConfig;
use fakenodes::harness::{self, AttackKind, ExperimentConfig};
use std::time::Instant;

fn main() {
    let cfg = ExperimentConfig {
        dataset: DatasetSpec::synthetic(SyntheticSpec {
            blocks: 7,
            per_block: 387,
            p_intra: 0.0050,
            p_inter: 0.0002,
            dim: 1433,
            feature_bias: 0.015,
        }),
        budget_per_fake: 20,
        seeds: vec![0],
        train: TrainConfig::default(),
        ..ExperimentConfig::default()
    };
    let t = Instant::now();
    let greedy = harness::run_nontargeted(&cfg).unwrap();
    println!(
        "greedy: clean {:.4} -> attacked {:.4} (budget {} units, {:.1} min)",
        greedy.clean_mean(),
        greedy.mean,
        greedy.per_seed[0].budget_used,
        t.elapsed().as_secs_f64() / 60.0
    );
    let mut rnd = cfg.clone();
    rnd.attack = AttackKind::Random;
    let t = Instant::now();
    let random = harness::run_nontargeted(&rnd).unwrap();
    println!(
        "random: clean {:.4} -> attacked {:.4} ({:.1} min)",
        random.clean_mean(),
        random.mean,
        t.elapsed().as_secs_f64() / 60.0
    );
}
