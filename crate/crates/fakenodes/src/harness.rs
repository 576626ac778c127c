//! End-to-end experiment runners: train, attack, evaluate, sweep, and the
//! CSV outputs behind the CLI.
//!
//! Every run is keyed by a config digest and a seed list. All randomness —
//! splits, weight init, fake features, fake labels, target draws — derives
//! from the per-run seed through fixed role constants, so a record can be
//! reproduced bit-identically from its config and seed.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use crate::data::{self, DatasetSpec};
use crate::error::{Error, Result};
use crate::gan::{detectability_f1, greedy_gan_attack, GanConfig};
use crate::gcn::{self, GcnModel, TrainConfig};
use crate::graph::{assemble, AugmentedGraph, Block, Graph, NormalizationMode};
use crate::greedy::{greedy_attack_hooked, random_attack, AttackTrace};
use crate::objective::{
    accuracy, success_metrics, success_rate, AttackGoal, Budget, Ratio,
};

pub const ROLE_SPLIT: u64 = 1;
pub const ROLE_MODEL: u64 = 2;
pub const ROLE_FAKE_FEATURES: u64 = 3;
pub const ROLE_FAKE_LABELS: u64 = 4;
pub const ROLE_TARGETS: u64 = 5;
pub const ROLE_ATTACK: u64 = 6;
pub const ROLE_F1: u64 = 7;
pub const ROLE_PAIRS: u64 = 8;
pub const ROLE_INIT_EDGES: u64 = 9;

pub fn derive_rng(seed: u64, role: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&role.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

pub fn derive_u64(seed: u64, role: u64) -> u64 {
    derive_rng(seed, role).random()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackKind {
    Greedy,
    GreedyGan,
    Random,
}

impl AttackKind {
    pub fn name(&self) -> &'static str {
        match self {
            AttackKind::Greedy => "greedy",
            AttackKind::GreedyGan => "greedy-gan",
            AttackKind::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(AttackKind::Greedy),
            "greedy-gan" | "gan" => Ok(AttackKind::GreedyGan),
            "random" => Ok(AttackKind::Random),
            other => Err(Error::Config(format!("unknown attack kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GoalKind {
    NonTargeted,
    TargetedWhole,
    /// A single victim. `None` fields are sampled per seed.
    TargetedSingle {
        node: Option<usize>,
        class: Option<usize>,
    },
}

impl GoalKind {
    pub fn name(&self) -> &'static str {
        match self {
            GoalKind::NonTargeted => "nontargeted",
            GoalKind::TargetedWhole => "targeted-whole",
            GoalKind::TargetedSingle { .. } => "targeted-single",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Score the clean-trained model on the attacked graph.
    Evasion,
    /// Retrain on the attacked graph (warm start, short schedule), then
    /// score.
    Poisoning,
}

impl EvalMode {
    pub fn name(&self) -> &'static str {
        match self {
            EvalMode::Evasion => "evasion",
            EvalMode::Poisoning => "poisoning",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "evasion" => Ok(EvalMode::Evasion),
            "poisoning" => Ok(EvalMode::Poisoning),
            other => Err(Error::Config(format!("unknown eval mode `{other}`"))),
        }
    }
}

/// Everything a run needs. Attack budgets are expressed per fake node and
/// scaled by the realized fake count.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub mode: NormalizationMode,
    pub attack: AttackKind,
    pub goal: GoalKind,
    pub fake_fraction: f64,
    pub fake_label_rate: f64,
    pub budget_per_fake: usize,
    pub ratio: Ratio,
    pub gan: GanConfig,
    pub train: TrainConfig,
    /// Learning rate of the poisoning retrain (the clean-training rate is
    /// in `train`).
    pub retrain_lr: f64,
    pub retrain_epochs: usize,
    pub seeds: Vec<u64>,
    pub eval_mode: EvalMode,
    /// Density for the initial random fake features; `None` matches the
    /// real feature density.
    pub init_feature_density: Option<f64>,
    /// Random fake edges per fake node before the attack starts.
    pub init_edges_per_fake: usize,
    /// Compute the detectability F1 of the attacked fakes.
    pub measure_f1: bool,
    /// Sampled (node, target) pairs per seed in single-node runs.
    pub single_pairs_per_seed: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dataset: DatasetSpec::synthetic(data::SyntheticSpec::default()),
            mode: NormalizationMode::RowWise,
            attack: AttackKind::Greedy,
            goal: GoalKind::NonTargeted,
            fake_fraction: 0.20,
            fake_label_rate: 0.25,
            budget_per_fake: 20,
            ratio: Ratio::default(),
            gan: GanConfig::default(),
            train: TrainConfig::default(),
            retrain_lr: 0.01,
            retrain_epochs: 50,
            seeds: vec![0, 1, 2, 3, 4],
            eval_mode: EvalMode::Evasion,
            init_feature_density: None,
            init_edges_per_fake: 0,
            measure_f1: false,
            single_pairs_per_seed: 10,
        }
    }
}

impl ExperimentConfig {
    /// Canonical key=value dump; equal configs produce equal digests.
    pub fn canonical(&self) -> String {
        let mut kv: BTreeMap<&'static str, String> = BTreeMap::new();
        kv.insert("dataset", self.dataset.name());
        kv.insert("labeled_fraction", format!("{}", self.dataset.labeled_fraction));
        kv.insert(
            "split_seed",
            self.dataset
                .split_seed
                .map(|s| s.to_string())
                .unwrap_or_else(|| "per-run".into()),
        );
        kv.insert("normalization", self.mode.name().into());
        kv.insert("attack", self.attack.name().into());
        kv.insert("goal", self.goal.name().into());
        if let GoalKind::TargetedSingle { node, class } = &self.goal {
            kv.insert("target_node", format!("{node:?}"));
            kv.insert("target_class", format!("{class:?}"));
        }
        kv.insert("fake_fraction", format!("{}", self.fake_fraction));
        kv.insert("fake_label_rate", format!("{}", self.fake_label_rate));
        kv.insert("budget_per_fake", format!("{}", self.budget_per_fake));
        kv.insert(
            "ratio",
            format!("{}:{}", self.ratio.edges, self.ratio.features),
        );
        kv.insert("gan_c", format!("{}", self.gan.c));
        kv.insert("gan_greedy_steps", format!("{}", self.gan.greedy_steps));
        kv.insert("gan_d_iters", format!("{}", self.gan.d_iters));
        kv.insert("gan_d_lr", format!("{}", self.gan.d_lr));
        kv.insert("gan_d_hidden", format!("{}", self.gan.d_hidden));
        kv.insert("gan_allow_drops", format!("{}", self.gan.allow_drops));
        kv.insert("lr", format!("{}", self.train.learning_rate));
        kv.insert("epochs", format!("{}", self.train.epochs));
        kv.insert("weight_decay", format!("{}", self.train.weight_decay));
        kv.insert("hidden", format!("{}", self.train.hidden));
        kv.insert("retrain_lr", format!("{}", self.retrain_lr));
        kv.insert("retrain_epochs", format!("{}", self.retrain_epochs));
        kv.insert("eval_mode", self.eval_mode.name().into());
        kv.insert(
            "init_feature_density",
            self.init_feature_density
                .map(|v| v.to_string())
                .unwrap_or_else(|| "real".into()),
        );
        kv.insert(
            "init_edges_per_fake",
            format!("{}", self.init_edges_per_fake),
        );
        kv.insert(
            "single_pairs_per_seed",
            format!("{}", self.single_pairs_per_seed),
        );
        let mut out = String::new();
        for (k, v) in kv {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical().as_bytes());
        let out = hasher.finalize();
        out[..8].iter().fold(String::new(), |mut acc, b| {
            let _ = write!(acc, "{b:02x}");
            acc
        })
    }

    fn fake_count(&self, n: usize) -> usize {
        (self.fake_fraction * n as f64).ceil() as usize
    }
}

/// Metrics for a single seed of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedOutcome {
    pub seed: u64,
    pub clean: f64,
    pub attacked: f64,
    pub f1: Option<f64>,
    pub budget_used: usize,
    pub wall_secs: f64,
    pub aug_digest: String,
}

/// Descriptive fields repeated on every CSV row of a record.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMeta {
    pub dataset: String,
    pub normalization: String,
    pub attack: String,
    pub goal: String,
    pub eval_mode: String,
}

impl RunMeta {
    fn of(cfg: &ExperimentConfig) -> Self {
        RunMeta {
            dataset: cfg.dataset.name(),
            normalization: cfg.mode.name().into(),
            attack: cfg.attack.name().into(),
            goal: cfg.goal.name().into(),
            eval_mode: cfg.eval_mode.name().into(),
        }
    }
}

/// Per-seed outcomes plus their aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub digest: String,
    pub meta: RunMeta,
    pub per_seed: Vec<SeedOutcome>,
    pub mean: f64,
    pub stddev: f64,
}

impl ResultRecord {
    pub fn from_outcomes(cfg: &ExperimentConfig, per_seed: Vec<SeedOutcome>) -> Self {
        let (mean, stddev) = mean_std(per_seed.iter().map(|o| o.attacked));
        ResultRecord {
            digest: cfg.digest(),
            meta: RunMeta::of(cfg),
            per_seed,
            mean,
            stddev,
        }
    }

    pub fn clean_mean(&self) -> f64 {
        mean_std(self.per_seed.iter().map(|o| o.clean)).0
    }

    pub fn f1_mean(&self) -> Option<f64> {
        let vals: Vec<f64> = self.per_seed.iter().filter_map(|o| o.f1).collect();
        if vals.is_empty() {
            None
        } else {
            Some(vals.iter().sum::<f64>() / vals.len() as f64)
        }
    }
}

pub fn mean_std(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let vals: Vec<f64> = values.collect();
    if vals.is_empty() {
        return (0.0, 0.0);
    }
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    if vals.len() < 2 {
        return (mean, 0.0);
    }
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64;
    (mean, var.sqrt())
}

/// Clean-trained model and its logits for one seed.
pub struct Prepared {
    pub graph: Graph,
    pub model: GcnModel,
    pub clean_logits: Array2<f64>,
}

pub fn prepare(cfg: &ExperimentConfig, seed: u64) -> Result<Prepared> {
    let graph = data::load(&cfg.dataset, derive_u64(seed, ROLE_SPLIT))?;
    let mut tcfg = cfg.train.clone();
    tcfg.seed = derive_u64(seed, ROLE_MODEL);
    let labeled: Vec<(usize, usize)> = graph
        .train_nodes()
        .into_iter()
        .map(|i| (i, graph.labels()[i]))
        .collect();
    let model = gcn::train(
        &graph.as_assembled(),
        &labeled,
        graph.num_classes(),
        cfg.mode,
        &tcfg,
    )?;
    let clean_logits = gcn::forward_graph(&model, &graph)?.logits;
    Ok(Prepared {
        graph,
        model,
        clean_logits,
    })
}

enum LabelPolicy {
    /// Label a `rate` fraction of fakes with uniform random classes.
    Random { rate: f64 },
    /// Label every fake with one class.
    All(usize),
}

fn build_augmentation(
    cfg: &ExperimentConfig,
    graph: &Graph,
    m: usize,
    seed: u64,
    labels: LabelPolicy,
) -> Result<AugmentedGraph> {
    let mut aug = AugmentedGraph::new(graph.clone(), m);
    let density = cfg
        .init_feature_density
        .unwrap_or_else(|| graph.feature_density());
    let mut rng = derive_rng(seed, ROLE_FAKE_FEATURES);
    aug.randomize_fake_features(density, &mut rng);
    if cfg.init_edges_per_fake > 0 {
        let mut rng = derive_rng(seed, ROLE_INIT_EDGES);
        aug.add_random_fake_edges(m * cfg.init_edges_per_fake, &mut rng);
    }
    match labels {
        LabelPolicy::Random { rate } => {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::Config(format!(
                    "fake label rate {rate} outside [0, 1]"
                )));
            }
            let k = (rate * m as f64).round() as usize;
            let mut rng = derive_rng(seed, ROLE_FAKE_LABELS);
            let mut order: Vec<usize> = (0..m).collect();
            for i in 0..k.min(m) {
                let j = rng.random_range(i..m);
                order.swap(i, j);
            }
            for &u in order.iter().take(k.min(m)) {
                let class = rng.random_range(0..graph.num_classes());
                aug.set_fake_label(u, Some(class))?;
            }
        }
        LabelPolicy::All(class) => {
            for u in 0..m {
                aug.set_fake_label(u, Some(class))?;
            }
        }
    }
    Ok(aug)
}

/// Run the configured attack. Returns the attacked graph, units spent, and
/// the trace when the attack produces one.
fn run_attack(
    cfg: &ExperimentConfig,
    model: &GcnModel,
    aug: AugmentedGraph,
    goal: &AttackGoal,
    budget: &Budget,
    seed: u64,
) -> Result<(AugmentedGraph, usize, Option<AttackTrace>)> {
    match cfg.attack {
        AttackKind::Greedy => {
            let (attacked, trace) =
                greedy_attack_hooked(aug, model, goal, budget, |_| false, |_, _| {})?;
            let used = trace.units_used();
            Ok((attacked, used, Some(trace)))
        }
        AttackKind::GreedyGan => {
            let mut gcfg = cfg.gan.clone();
            gcfg.seed = derive_u64(seed, ROLE_ATTACK);
            let (attacked, _disc, trace) = greedy_gan_attack(aug, model, goal, budget, &gcfg)?;
            let used = trace.units_used();
            Ok((attacked, used, Some(trace)))
        }
        AttackKind::Random => {
            let before: usize = {
                let (b, c, x) = aug.nonzeros();
                b + c + x
            };
            let attacked = random_attack(aug, budget, derive_u64(seed, ROLE_ATTACK))?;
            let (b, c, x) = attacked.nonzeros();
            Ok((attacked, b + c + x - before, None))
        }
    }
}

/// Evaluate an attacked graph under the configured evaluation mode and
/// return the goal metric (accuracy or success rate).
pub fn evaluate_attacked(
    cfg: &ExperimentConfig,
    prep: &Prepared,
    attacked: &AugmentedGraph,
    goal: &AttackGoal,
) -> Result<f64> {
    let asm = assemble(attacked)?;
    let logits = match cfg.eval_mode {
        EvalMode::Evasion => gcn::forward(&prep.model, &asm)?.logits,
        EvalMode::Poisoning => {
            let mut labeled: Vec<(usize, usize)> = prep
                .graph
                .train_nodes()
                .into_iter()
                .map(|i| (i, prep.graph.labels()[i]))
                .collect();
            labeled.extend(attacked.labeled_fakes());
            let mut tcfg = cfg.train.clone();
            tcfg.learning_rate = cfg.retrain_lr;
            tcfg.epochs = cfg.retrain_epochs;
            let retrained = gcn::train_from(prep.model.clone(), &asm, &labeled, &tcfg)?;
            gcn::forward(&retrained, &asm)?.logits
        }
    };
    Ok(success_metrics(&logits.view(), goal, &prep.graph).value())
}

fn seed_f1(attacked: &AugmentedGraph, graph: &Graph, seed: u64) -> Result<f64> {
    let x_fake = attacked.x_fake_matrix();
    detectability_f1(
        &x_fake.view(),
        &graph.features().view(),
        derive_u64(seed, ROLE_F1),
    )
}

/// Non-targeted attack experiment across the configured seeds.
pub fn run_nontargeted(cfg: &ExperimentConfig) -> Result<ResultRecord> {
    let mut outcomes = Vec::new();
    for &seed in &cfg.seeds {
        let started = Instant::now();
        let prep = prepare(cfg, seed)?;
        let goal = AttackGoal::non_targeted(prep.graph.labels());
        let m = cfg.fake_count(prep.graph.num_nodes());
        let budget = Budget::new(cfg.budget_per_fake * m, cfg.ratio)?;
        let aug = build_augmentation(
            cfg,
            &prep.graph,
            m,
            seed,
            LabelPolicy::Random {
                rate: cfg.fake_label_rate,
            },
        )?;
        let (attacked, used, _trace) = run_attack(cfg, &prep.model, aug, &goal, &budget, seed)?;
        let clean = accuracy(&prep.clean_logits.view(), &prep.graph);
        let metric = evaluate_attacked(cfg, &prep, &attacked, &goal)?;
        let f1 = if cfg.measure_f1 && m > 0 {
            Some(seed_f1(&attacked, &prep.graph, seed)?)
        } else {
            None
        };
        outcomes.push(SeedOutcome {
            seed,
            clean,
            attacked: metric,
            f1,
            budget_used: used,
            wall_secs: started.elapsed().as_secs_f64(),
            aug_digest: data::augmented_digest(&attacked),
        });
    }
    Ok(ResultRecord::from_outcomes(cfg, outcomes))
}

fn draw_whole_graph_targets(graph: &Graph, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = derive_rng(seed, ROLE_TARGETS);
    let classes = graph.num_classes();
    (0..graph.num_nodes())
        .map(|i| {
            let y = graph.labels()[i];
            let t = if classes < 2 {
                y
            } else {
                let mut t = rng.random_range(0..classes - 1);
                if t >= y {
                    t += 1;
                }
                t
            };
            (i, t)
        })
        .collect()
}

/// Targeted attack on every real node, with per-node targets drawn
/// uniformly among the wrong classes.
pub fn run_targeted_whole(cfg: &ExperimentConfig) -> Result<ResultRecord> {
    let mut outcomes = Vec::new();
    for &seed in &cfg.seeds {
        let started = Instant::now();
        let prep = prepare(cfg, seed)?;
        let targets = draw_whole_graph_targets(&prep.graph, seed);
        let goal = AttackGoal::targeted(targets.clone())?;
        let m = cfg.fake_count(prep.graph.num_nodes());
        let budget = Budget::new(cfg.budget_per_fake * m, cfg.ratio)?;
        let aug = build_augmentation(
            cfg,
            &prep.graph,
            m,
            seed,
            LabelPolicy::Random {
                rate: cfg.fake_label_rate,
            },
        )?;
        let (attacked, used, _trace) = run_attack(cfg, &prep.model, aug, &goal, &budget, seed)?;
        let clean = success_rate(&prep.clean_logits.view(), &targets);
        let metric = evaluate_attacked(cfg, &prep, &attacked, &goal)?;
        outcomes.push(SeedOutcome {
            seed,
            clean,
            attacked: metric,
            f1: None,
            budget_used: used,
            wall_secs: started.elapsed().as_secs_f64(),
            aug_digest: data::augmented_digest(&attacked),
        });
    }
    Ok(ResultRecord::from_outcomes(cfg, outcomes))
}

/// Aggregates of a single-node targeted run.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleNodeReport {
    pub record: ResultRecord,
    pub pairs: usize,
    pub mean_edges_per_fake: f64,
    pub mean_features_per_fake: f64,
}

/// Targeted attack on one node at a time: three fake nodes labeled with the
/// target class, greedy attack stopping as soon as the victim flips.
/// `(node, target)` pairs are sampled per seed unless pinned in the goal.
pub fn run_targeted_single(cfg: &ExperimentConfig) -> Result<SingleNodeReport> {
    if cfg.attack != AttackKind::Greedy {
        return Err(Error::Config(
            "single-node targeted attacks support only the greedy attack".into(),
        ));
    }
    let GoalKind::TargetedSingle { node, class } = cfg.goal else {
        return Err(Error::Config(
            "run_targeted_single needs a targeted-single goal".into(),
        ));
    };
    const FAKES: usize = 3;
    let mut outcomes = Vec::new();
    let mut total_pairs = 0usize;
    let mut edge_units = 0usize;
    let mut feature_units = 0usize;
    for &seed in &cfg.seeds {
        let started = Instant::now();
        let prep = prepare(cfg, seed)?;
        let classes = prep.graph.num_classes();
        let mut rng = derive_rng(seed, ROLE_PAIRS);
        let pairs: Vec<(usize, usize)> = if let (Some(v), Some(t)) = (node, class) {
            vec![(v, t)]
        } else {
            (0..cfg.single_pairs_per_seed.max(1))
                .map(|_| {
                    let v = node.unwrap_or_else(|| rng.random_range(0..prep.graph.num_nodes()));
                    let t = class.unwrap_or_else(|| {
                        let y = prep.graph.labels()[v];
                        if classes < 2 {
                            y
                        } else {
                            let mut t = rng.random_range(0..classes - 1);
                            if t >= y {
                                t += 1;
                            }
                            t
                        }
                    });
                    (v, t)
                })
                .collect()
        };
        let mut clean_hits = 0usize;
        let mut hits = 0usize;
        let mut used_total = 0usize;
        for (pair_idx, &(victim, target)) in pairs.iter().enumerate() {
            let goal = AttackGoal::targeted(vec![(victim, target)])?;
            let pair_seed = seed
                .wrapping_mul(0x100_0000)
                .wrapping_add(pair_idx as u64);
            let aug = build_augmentation(
                cfg,
                &prep.graph,
                FAKES,
                pair_seed,
                LabelPolicy::All(target),
            )?;
            let budget = Budget::new(cfg.budget_per_fake * FAKES, cfg.ratio)?;
            let pair = [(victim, target)];
            let (attacked, trace) = greedy_attack_hooked(
                aug,
                &prep.model,
                &goal,
                &budget,
                |logits| success_rate(&logits.view(), &pair) == 1.0,
                |_, _| {},
            )?;
            if success_rate(&prep.clean_logits.view(), &pair) == 1.0 {
                clean_hits += 1;
            }
            let metric = evaluate_attacked(cfg, &prep, &attacked, &goal)?;
            if metric == 1.0 {
                hits += 1;
            }
            used_total += trace.units_used();
            for s in &trace.steps {
                match s.block {
                    Block::XFake => feature_units += 1,
                    _ => edge_units += 1,
                }
            }
            total_pairs += 1;
        }
        let denom = pairs.len().max(1) as f64;
        outcomes.push(SeedOutcome {
            seed,
            clean: clean_hits as f64 / denom,
            attacked: hits as f64 / denom,
            f1: None,
            budget_used: used_total / pairs.len().max(1),
            wall_secs: started.elapsed().as_secs_f64(),
            aug_digest: String::new(),
        });
    }
    let record = ResultRecord::from_outcomes(cfg, outcomes);
    let denom = (total_pairs * FAKES).max(1) as f64;
    Ok(SingleNodeReport {
        record,
        pairs: total_pairs,
        mean_edges_per_fake: edge_units as f64 / denom,
        mean_features_per_fake: feature_units as f64 / denom,
    })
}

/// Dispatch on the configured goal kind.
pub fn run(cfg: &ExperimentConfig) -> Result<ResultRecord> {
    match cfg.goal {
        GoalKind::NonTargeted => run_nontargeted(cfg),
        GoalKind::TargetedWhole => run_targeted_whole(cfg),
        GoalKind::TargetedSingle { .. } => Ok(run_targeted_single(cfg)?.record),
    }
}

/// What a sweep varies. Each point reuses the shared seed list so curves
/// are paired.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    FakeFraction(Vec<f64>),
    LabelRate(Vec<f64>),
    BudgetPerFake(Vec<usize>),
    GanC(Vec<f64>),
}

impl SweepAxis {
    pub fn default_fake_fraction() -> Self {
        SweepAxis::FakeFraction(vec![0.025, 0.05, 0.10, 0.20])
    }

    pub fn default_label_rate() -> Self {
        SweepAxis::LabelRate(vec![0.0, 0.05, 0.10, 0.15, 0.20])
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::FakeFraction(_) => "fake_fraction",
            SweepAxis::LabelRate(_) => "label_rate",
            SweepAxis::BudgetPerFake(_) => "budget_per_fake",
            SweepAxis::GanC(_) => "gan_c",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub record: ResultRecord,
}

/// One record per axis point. Label-rate sweeps force poisoning mode —
/// fake labels cannot influence an evasion evaluation.
pub fn sweep(cfg: &ExperimentConfig, axis: &SweepAxis) -> Result<Vec<SweepPoint>> {
    let mut out = Vec::new();
    let points: Vec<(f64, ExperimentConfig)> = match axis {
        SweepAxis::FakeFraction(vals) => vals
            .iter()
            .map(|&v| {
                let mut c = cfg.clone();
                c.fake_fraction = v;
                (v, c)
            })
            .collect(),
        SweepAxis::LabelRate(vals) => vals
            .iter()
            .map(|&v| {
                let mut c = cfg.clone();
                c.fake_label_rate = v;
                c.eval_mode = EvalMode::Poisoning;
                (v, c)
            })
            .collect(),
        SweepAxis::BudgetPerFake(vals) => vals
            .iter()
            .map(|&v| {
                let mut c = cfg.clone();
                c.budget_per_fake = v;
                (v as f64, c)
            })
            .collect(),
        SweepAxis::GanC(vals) => vals
            .iter()
            .map(|&v| {
                let mut c = cfg.clone();
                c.gan.c = v;
                (v, c)
            })
            .collect(),
    };
    for (value, point_cfg) in points {
        out.push(SweepPoint {
            axis_value: value,
            record: run(&point_cfg)?,
        });
    }
    Ok(out)
}

/// Boundaries (inclusive) of the clean-degree buckets used by the degree
/// analysis.
pub const DEGREE_BUCKETS: [(usize, usize); 4] =
    [(0, 1), (2, 3), (4, 7), (8, usize::MAX)];

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeBucket {
    pub min_degree: usize,
    pub max_degree: usize,
    pub nodes: usize,
    /// Fraction of the bucket whose prediction changed under attack.
    pub flip_rate: f64,
}

/// Bucket real nodes by clean degree and report per-bucket prediction flip
/// rates. Empty buckets are omitted.
pub fn degree_analysis(
    graph: &Graph,
    clean_pred: &[usize],
    attacked_pred: &[usize],
) -> Vec<DegreeBucket> {
    let mut out = Vec::new();
    for &(lo, hi) in &DEGREE_BUCKETS {
        let mut nodes = 0;
        let mut flipped = 0;
        for i in 0..graph.num_nodes() {
            let deg = graph.degree(i);
            if deg >= lo && deg <= hi {
                nodes += 1;
                if clean_pred[i] != attacked_pred[i] {
                    flipped += 1;
                }
            }
        }
        if nodes > 0 {
            out.push(DegreeBucket {
                min_degree: lo,
                max_degree: hi,
                nodes,
                flip_rate: flipped as f64 / nodes as f64,
            });
        }
    }
    out
}

fn argmax_rows(logits: &Array2<f64>, n: usize) -> Vec<usize> {
    (0..n)
        .map(|i| crate::objective::argmax_row(&logits.row(i)))
        .collect()
}

/// Run the configured attack per seed and average per-bucket flip rates.
/// Works for the non-targeted and whole-graph targeted goals.
pub fn run_degree_analysis(cfg: &ExperimentConfig) -> Result<Vec<DegreeBucket>> {
    let mut acc: BTreeMap<(usize, usize), (usize, Vec<f64>)> = BTreeMap::new();
    for &seed in &cfg.seeds {
        let prep = prepare(cfg, seed)?;
        let goal = match cfg.goal {
            GoalKind::NonTargeted => AttackGoal::non_targeted(prep.graph.labels()),
            GoalKind::TargetedWhole => {
                AttackGoal::targeted(draw_whole_graph_targets(&prep.graph, seed))?
            }
            GoalKind::TargetedSingle { .. } => {
                return Err(Error::Config(
                    "degree analysis needs a whole-graph goal".into(),
                ))
            }
        };
        let m = cfg.fake_count(prep.graph.num_nodes());
        let budget = Budget::new(cfg.budget_per_fake * m, cfg.ratio)?;
        let aug = build_augmentation(
            cfg,
            &prep.graph,
            m,
            seed,
            LabelPolicy::Random {
                rate: cfg.fake_label_rate,
            },
        )?;
        let (attacked, _, _) = run_attack(cfg, &prep.model, aug, &goal, &budget, seed)?;
        let asm = assemble(&attacked)?;
        let attacked_logits = gcn::forward(&prep.model, &asm)?.logits;
        let n = prep.graph.num_nodes();
        let clean_pred = argmax_rows(&prep.clean_logits, n);
        let attacked_pred = argmax_rows(&attacked_logits, n);
        for b in degree_analysis(&prep.graph, &clean_pred, &attacked_pred) {
            let entry = acc
                .entry((b.min_degree, b.max_degree))
                .or_insert((0, Vec::new()));
            entry.0 = b.nodes;
            entry.1.push(b.flip_rate);
        }
    }
    Ok(acc
        .into_iter()
        .map(|((lo, hi), (nodes, rates))| DegreeBucket {
            min_degree: lo,
            max_degree: hi,
            nodes,
            flip_rate: rates.iter().sum::<f64>() / rates.len().max(1) as f64,
        })
        .collect())
}

/// A per-step metric curve aggregated over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub mean: f64,
    pub stddev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationArm {
    pub label: String,
    pub record: ResultRecord,
    pub curve: Vec<CurvePoint>,
}

/// Greedy attack restricted to edges only, features only, or both, from the
/// same randomly initialized augmentation with the same budget.
/// The curves track evasion accuracy per attack step.
pub fn ablate_features_vs_edges(cfg: &ExperimentConfig) -> Result<Vec<AblationArm>> {
    let arms = [
        ("edges-only", Ratio { edges: 1, features: 0 }),
        ("features-only", Ratio { edges: 0, features: 1 }),
        ("both", Ratio { edges: 1, features: 1 }),
    ];
    let mut out = Vec::new();
    for (label, ratio) in arms {
        let mut arm_cfg = cfg.clone();
        arm_cfg.ratio = ratio;
        arm_cfg.attack = AttackKind::Greedy;
        if arm_cfg.init_edges_per_fake == 0 {
            arm_cfg.init_edges_per_fake = 4;
        }
        let mut outcomes = Vec::new();
        let mut curves: Vec<Vec<(usize, f64)>> = Vec::new();
        for &seed in &arm_cfg.seeds {
            let started = Instant::now();
            let prep = prepare(&arm_cfg, seed)?;
            let goal = AttackGoal::non_targeted(prep.graph.labels());
            let m = arm_cfg.fake_count(prep.graph.num_nodes());
            let budget = Budget::new(arm_cfg.budget_per_fake * m, ratio)?;
            let aug = build_augmentation(
                &arm_cfg,
                &prep.graph,
                m,
                seed,
                LabelPolicy::Random {
                    rate: arm_cfg.fake_label_rate,
                },
            )?;
            let stride = (budget.total / 40).max(1);
            let mut curve = vec![(0usize, accuracy(&prep.clean_logits.view(), &prep.graph))];
            {
                let graph = &prep.graph;
                let curve_ref = &mut curve;
                let (attacked, trace) = greedy_attack_hooked(
                    aug,
                    &prep.model,
                    &goal,
                    &budget,
                    |_| false,
                    |step, logits| {
                        if step % stride == 0 || step == budget.total {
                            curve_ref.push((step, accuracy(&logits.view(), graph)));
                        }
                    },
                )?;
                let clean = accuracy(&prep.clean_logits.view(), &prep.graph);
                let metric = evaluate_attacked(&arm_cfg, &prep, &attacked, &goal)?;
                outcomes.push(SeedOutcome {
                    seed,
                    clean,
                    attacked: metric,
                    f1: None,
                    budget_used: trace.units_used(),
                    wall_secs: started.elapsed().as_secs_f64(),
                    aug_digest: data::augmented_digest(&attacked),
                });
            }
            curves.push(curve);
        }
        // Aggregate curves over seeds at shared x positions.
        let mut by_x: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for curve in &curves {
            for &(x, y) in curve {
                by_x.entry(x).or_default().push(y);
            }
        }
        let curve = by_x
            .into_iter()
            .filter(|(_, ys)| ys.len() == curves.len())
            .map(|(x, ys)| {
                let (mean, stddev) = mean_std(ys.into_iter());
                CurvePoint {
                    x: x as f64,
                    mean,
                    stddev,
                }
            })
            .collect();
        out.push(AblationArm {
            label: label.to_string(),
            record: ResultRecord::from_outcomes(&arm_cfg, outcomes),
            curve,
        });
    }
    Ok(out)
}

/// The same pipeline under both normalization modes with paired seeds.
pub fn compare_normalizations(
    cfg: &ExperimentConfig,
) -> Result<(ResultRecord, ResultRecord)> {
    let mut row = cfg.clone();
    row.mode = NormalizationMode::RowWise;
    let mut sym = cfg.clone();
    sym.mode = NormalizationMode::Symmetric;
    Ok((run(&row)?, run(&sym)?))
}

pub const RESULTS_HEADER: &str = "digest,dataset,normalization,attack,goal,eval_mode,axis,axis_value,seed,clean,attacked,f1,budget_used,wall_secs";

/// One CSV row per seed of a record.
pub fn result_rows(record: &ResultRecord, axis: Option<(&str, f64)>) -> Vec<String> {
    let (axis_name, axis_value) = axis
        .map(|(n, v)| (n.to_string(), v.to_string()))
        .unwrap_or_default();
    record
        .per_seed
        .iter()
        .map(|o| {
            format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                record.digest,
                record.meta.dataset,
                record.meta.normalization,
                record.meta.attack,
                record.meta.goal,
                record.meta.eval_mode,
                axis_name,
                axis_value,
                o.seed,
                o.clean,
                o.attacked,
                o.f1.map(|v| v.to_string()).unwrap_or_default(),
                o.budget_used,
                o.wall_secs
            )
        })
        .collect()
}

pub fn write_results_csv(path: &Path, rows: &[String]) -> Result<()> {
    let mut buf = String::from(RESULTS_HEADER);
    buf.push('\n');
    for r in rows {
        buf.push_str(r);
        buf.push('\n');
    }
    std::fs::write(path, buf).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Plot-data CSV: `x,mean,stddev`.
pub fn write_plot_csv(path: &Path, points: &[CurvePoint]) -> Result<()> {
    let mut buf = String::from("x,mean,stddev\n");
    for p in points {
        let _ = writeln!(buf, "{},{},{}", p.x, p.mean, p.stddev);
    }
    std::fs::write(path, buf).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Aggregate of rows sharing a digest and axis value in a results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub digest: String,
    pub dataset: String,
    pub normalization: String,
    pub attack: String,
    pub goal: String,
    pub eval_mode: String,
    pub axis: String,
    pub axis_value: String,
    pub seeds: usize,
    pub clean_mean: f64,
    pub attacked_mean: f64,
    pub attacked_std: f64,
    pub f1_mean: Option<f64>,
}

/// Group a results CSV by configuration and recompute aggregates.
pub fn summarize_results_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::Parse {
            file: path.to_path_buf(),
            line: 1,
            msg: "empty results file".into(),
        });
    };
    if header != RESULTS_HEADER {
        return Err(Error::Parse {
            file: path.to_path_buf(),
            line: 1,
            msg: format!("unexpected header `{header}`"),
        });
    }
    let mut groups: BTreeMap<(String, String), (Vec<String>, Vec<f64>, Vec<f64>, Vec<f64>)> =
        BTreeMap::new();
    for (ln, line) in lines {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 14 {
            return Err(Error::Parse {
                file: path.to_path_buf(),
                line: ln + 1,
                msg: format!("expected 14 fields, found {}", f.len()),
            });
        }
        let parse_f64 = |tok: &str| -> Result<f64> {
            tok.parse().map_err(|e| Error::Parse {
                file: path.to_path_buf(),
                line: ln + 1,
                msg: format!("bad number `{tok}`: {e}"),
            })
        };
        let key = (f[0].to_string(), f[7].to_string());
        let entry = groups.entry(key).or_insert_with(|| {
            (
                f[..8].iter().map(|s| s.to_string()).collect(),
                Vec::new(),
                Vec::new(),
                Vec::new(),
            )
        });
        entry.1.push(parse_f64(f[9])?);
        entry.2.push(parse_f64(f[10])?);
        if !f[11].is_empty() {
            entry.3.push(parse_f64(f[11])?);
        }
    }
    Ok(groups
        .into_values()
        .map(|(meta, clean, attacked, f1)| {
            let (attacked_mean, attacked_std) = mean_std(attacked.iter().copied());
            SummaryRow {
                digest: meta[0].clone(),
                dataset: meta[1].clone(),
                normalization: meta[2].clone(),
                attack: meta[3].clone(),
                goal: meta[4].clone(),
                eval_mode: meta[5].clone(),
                axis: meta[6].clone(),
                axis_value: meta[7].clone(),
                seeds: attacked.len(),
                clean_mean: mean_std(clean.iter().copied()).0,
                attacked_mean,
                attacked_std,
                f1_mean: if f1.is_empty() {
                    None
                } else {
                    Some(f1.iter().sum::<f64>() / f1.len() as f64)
                },
            }
        })
        .collect())
}

/// Parse a key=value config file. Blank lines and `#` comments are skipped.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut out = BTreeMap::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                file: path.to_path_buf(),
                line: ln + 1,
                msg: "expected `key=value`".into(),
            });
        };
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}
