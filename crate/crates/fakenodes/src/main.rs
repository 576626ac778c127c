//! Command-line front end. Subcommands map onto the library's experiment
//! runners; every flag can also be supplied through `--config file` as
//! `key=value` lines, with explicit flags winning.

use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use fakenodes::data::{self, DataSource, DatasetSpec, SyntheticSpec};
use fakenodes::gan::GanConfig;
use fakenodes::gcn::{self, TrainConfig};
use fakenodes::graph::NormalizationMode;
use fakenodes::harness::{
    self, AttackKind, EvalMode, ExperimentConfig, GoalKind, SweepAxis,
};
use fakenodes::objective::Ratio;
use fakenodes::{Error, Result};

#[derive(Parser)]
#[command(
    name = "fakenodes",
    about = "Fake-node injection attacks on two-layer GCN node classification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a clean GCN and report its test accuracy.
    Train(TrainArgs),
    /// Attack a graph with fake nodes and report the attacked metric.
    Attack(AttackArgs),
    /// Evaluate a saved augmented graph under a model.
    Eval(EvalArgs),
    /// Run a sweep along one axis and write results plus plot data.
    Sweep(SweepArgs),
    /// Aggregate a results CSV into per-config summary rows.
    Report(ReportArgs),
}

/// Flags shared by every run-like subcommand. All optional so that config
/// files can fill them in.
#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Config file with key=value lines (flag names as keys).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dataset: cora | citeseer | synthetic | native.
    #[arg(long)]
    dataset: Option<String>,
    /// Directory holding the dataset files.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Normalization: rowwise | symmetric.
    #[arg(long)]
    normalization: Option<String>,
    /// Fraction of nodes labeled for training.
    #[arg(long)]
    labeled_fraction: Option<f64>,
    /// Pin the split seed instead of deriving it per run seed.
    #[arg(long)]
    split_seed: Option<u64>,
    /// Comma-separated run seeds.
    #[arg(long)]
    seeds: Option<String>,
    /// GCN hidden width.
    #[arg(long)]
    hidden: Option<usize>,
    /// Training learning rate.
    #[arg(long)]
    lr: Option<f64>,
    /// Training epochs for the clean model.
    #[arg(long)]
    epochs: Option<usize>,
    /// L2 penalty on the first layer.
    #[arg(long)]
    weight_decay: Option<f64>,
    /// Retraining epochs under poisoning evaluation.
    #[arg(long)]
    retrain_epochs: Option<usize>,
    /// Retraining learning rate under poisoning evaluation.
    #[arg(long)]
    retrain_lr: Option<f64>,
    /// Synthetic generator: blocks.
    #[arg(long)]
    synth_blocks: Option<usize>,
    /// Synthetic generator: nodes per block.
    #[arg(long)]
    synth_per_block: Option<usize>,
    /// Synthetic generator: intra-block edge probability.
    #[arg(long)]
    synth_p_intra: Option<f64>,
    /// Synthetic generator: inter-block edge probability.
    #[arg(long)]
    synth_p_inter: Option<f64>,
    /// Synthetic generator: feature dimension.
    #[arg(long)]
    synth_dim: Option<usize>,
    /// Synthetic generator: in-class feature probability.
    #[arg(long)]
    synth_bias: Option<f64>,
}

#[derive(Args, Clone, Default)]
struct AttackFlags {
    /// Attack kind: greedy | greedy-gan | random.
    #[arg(long)]
    attack: Option<String>,
    /// Goal: nontargeted | targeted-whole | targeted-single.
    #[arg(long)]
    goal: Option<String>,
    /// Victim node for targeted-single.
    #[arg(long)]
    target_node: Option<usize>,
    /// Target class for targeted-single.
    #[arg(long)]
    target_class: Option<usize>,
    /// Fake nodes as a fraction of real nodes.
    #[arg(long)]
    fake_fraction: Option<f64>,
    /// Fraction of fake nodes that receive labels.
    #[arg(long)]
    fake_label_rate: Option<f64>,
    /// Flip budget per fake node.
    #[arg(long)]
    budget_per_fake: Option<usize>,
    /// Edge:feature flip ratio, e.g. 1:1 or 2:1.
    #[arg(long)]
    ratio: Option<String>,
    /// Discriminator weight c in the combined objective.
    #[arg(long)]
    gan_c: Option<f64>,
    /// Greedy flips between discriminator retrains.
    #[arg(long)]
    gan_steps: Option<usize>,
    /// Discriminator iterations per retrain.
    #[arg(long)]
    gan_d_iters: Option<usize>,
    /// Discriminator learning rate.
    #[arg(long)]
    gan_d_lr: Option<f64>,
    /// Discriminator hidden width.
    #[arg(long)]
    gan_d_hidden: Option<usize>,
    /// Disable drops in the GAN attack.
    #[arg(long)]
    no_drops: bool,
    /// Evaluation mode: evasion | poisoning.
    #[arg(long)]
    eval_mode: Option<String>,
    /// Density of the initial random fake features.
    #[arg(long)]
    init_feature_density: Option<f64>,
    /// Random fake edges per fake node before attacking.
    #[arg(long)]
    init_edges_per_fake: Option<usize>,
    /// Also report the detectability F1 of the fakes.
    #[arg(long)]
    f1: bool,
    /// Sampled (node, target) pairs per seed for targeted-single.
    #[arg(long)]
    single_pairs: Option<usize>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Write the trained model here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also save the loaded graph as a native directory.
    #[arg(long)]
    save_graph: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    attack: AttackFlags,
    /// Output directory for the attacked graph, trace and results.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Print a per-degree-bucket flip-rate table after the attack.
    #[arg(long)]
    degree_analysis: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Augmented graph directory (native format).
    #[arg(long)]
    graph_dir: PathBuf,
    /// Trained model file.
    #[arg(long)]
    model: PathBuf,
    /// Evaluation mode: evasion | poisoning.
    #[arg(long)]
    eval_mode: Option<String>,
    /// Run seed for the poisoning retrain.
    #[arg(long)]
    seed: Option<u64>,
    /// Also report the detectability F1 of the fakes.
    #[arg(long)]
    f1: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    attack: AttackFlags,
    /// Axis: fake-fraction | label-rate | budget | gan-c.
    #[arg(long)]
    axis: String,
    /// Comma-separated axis points (defaults per axis).
    #[arg(long)]
    points: Option<String>,
    /// Output directory for results.csv and plot data.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// results.csv produced by attack or sweep.
    #[arg(long)]
    results: PathBuf,
    /// Where to write summary.csv (defaults next to the input).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Train(args) => cmd_train(args),
        Command::Attack(args) => cmd_attack(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Report(args) => cmd_report(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(match e.category() {
                "config" => 2,
                "parse" | "io" | "structure" => 3,
                "numeric" => 4,
                "constraint" | "immutability" => 5,
                _ => 1,
            })
        }
    }
}

/// Merge precedence: explicit flag, then config file, then default.
struct Merge {
    file: BTreeMap<String, String>,
}

impl Merge {
    fn load(path: &Option<PathBuf>) -> Result<Self> {
        let file = match path {
            Some(p) => harness::parse_config_file(p)?,
            None => BTreeMap::new(),
        };
        Ok(Merge { file })
    }

    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(raw) => raw.parse::<T>().map_err(|_| {
                Error::Config(format!("config key `{key}` has invalid value `{raw}`"))
            }),
            None => Ok(default),
        }
    }

    fn get_opt<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::Config(format!("config key `{key}` has invalid value `{raw}`"))),
            None => Ok(None),
        }
    }
}

fn parse_seeds(raw: &str) -> Result<Vec<u64>> {
    raw.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::Config(format!("bad seed `{t}`: {e}")))
        })
        .collect()
}

fn parse_ratio(raw: &str) -> Result<Ratio> {
    let (e, f) = raw
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("ratio `{raw}` must look like E:F")))?;
    let edges = e
        .parse()
        .map_err(|err| Error::Config(format!("bad ratio `{raw}`: {err}")))?;
    let features = f
        .parse()
        .map_err(|err| Error::Config(format!("bad ratio `{raw}`: {err}")))?;
    Ok(Ratio { edges, features })
}

fn dataset_from(common: &CommonArgs, merge: &Merge) -> Result<DatasetSpec> {
    let name = merge.get(common.dataset.clone(), "dataset", "synthetic".to_string())?;
    let data_dir = merge.get_opt(common.data_dir.clone(), "data-dir")?;
    let source = match name.as_str() {
        "cora" | "citeseer" => {
            let dir = data_dir.unwrap_or_else(|| PathBuf::from("data").join(&name));
            DataSource::ContentCites { name, dir }
        }
        "native" => {
            let dir = data_dir
                .ok_or_else(|| Error::Config("--data-dir is required for native datasets".into()))?;
            DataSource::NativeDir { dir }
        }
        "synthetic" => {
            let d = SyntheticSpec::default();
            DataSource::Synthetic(SyntheticSpec {
                blocks: merge.get(common.synth_blocks, "synth-blocks", d.blocks)?,
                per_block: merge.get(common.synth_per_block, "synth-per-block", d.per_block)?,
                p_intra: merge.get(common.synth_p_intra, "synth-p-intra", d.p_intra)?,
                p_inter: merge.get(common.synth_p_inter, "synth-p-inter", d.p_inter)?,
                dim: merge.get(common.synth_dim, "synth-dim", d.dim)?,
                feature_bias: merge.get(common.synth_bias, "synth-bias", d.feature_bias)?,
            })
        }
        other => {
            return Err(Error::Config(format!(
                "unknown dataset `{other}` (expected cora|citeseer|synthetic|native)"
            )))
        }
    };
    let mut spec = DatasetSpec::new(source);
    spec.split_seed = merge.get_opt(common.split_seed, "split-seed")?;
    spec.labeled_fraction = merge.get(common.labeled_fraction, "labeled-fraction", 0.20)?;
    Ok(spec)
}

fn experiment_config(
    common: &CommonArgs,
    attack: &AttackFlags,
    merge: &Merge,
) -> Result<ExperimentConfig> {
    let defaults = ExperimentConfig::default();
    let dataset = dataset_from(common, merge)?;
    let mode = NormalizationMode::parse(&merge.get(
        common.normalization.clone(),
        "normalization",
        "rowwise".to_string(),
    )?)?;
    let attack_kind = AttackKind::parse(&merge.get(
        attack.attack.clone(),
        "attack",
        "greedy".to_string(),
    )?)?;
    let goal_name = merge.get(attack.goal.clone(), "goal", "nontargeted".to_string())?;
    let goal = match goal_name.as_str() {
        "nontargeted" => GoalKind::NonTargeted,
        "targeted-whole" => GoalKind::TargetedWhole,
        "targeted-single" => GoalKind::TargetedSingle {
            node: merge.get_opt(attack.target_node, "target-node")?,
            class: merge.get_opt(attack.target_class, "target-class")?,
        },
        other => {
            return Err(Error::Config(format!(
                "unknown goal `{other}` (expected nontargeted|targeted-whole|targeted-single)"
            )))
        }
    };
    let seeds = match merge.get_opt(common.seeds.clone(), "seeds")? {
        Some(raw) => parse_seeds(&raw)?,
        None => defaults.seeds.clone(),
    };
    let ratio = match merge.get_opt(attack.ratio.clone(), "ratio")? {
        Some(raw) => parse_ratio(&raw)?,
        None => Ratio::default(),
    };
    let eval_mode = EvalMode::parse(&merge.get(
        attack.eval_mode.clone(),
        "eval-mode",
        "evasion".to_string(),
    )?)?;
    let train = TrainConfig {
        learning_rate: merge.get(common.lr, "lr", defaults.train.learning_rate)?,
        epochs: merge.get(common.epochs, "epochs", defaults.train.epochs)?,
        weight_decay: merge.get(common.weight_decay, "weight-decay", defaults.train.weight_decay)?,
        hidden: merge.get(common.hidden, "hidden", defaults.train.hidden)?,
        seed: 0,
    };
    let gan = GanConfig {
        c: merge.get(attack.gan_c, "gan-c", defaults.gan.c)?,
        greedy_steps: merge.get(attack.gan_steps, "gan-steps", defaults.gan.greedy_steps)?,
        d_iters: merge.get(attack.gan_d_iters, "gan-d-iters", defaults.gan.d_iters)?,
        d_lr: merge.get(attack.gan_d_lr, "gan-d-lr", defaults.gan.d_lr)?,
        d_hidden: merge.get(attack.gan_d_hidden, "gan-d-hidden", defaults.gan.d_hidden)?,
        allow_drops: !attack.no_drops
            && merge.get(None::<bool>, "allow-drops", true)?,
        skip_initial_retrain: false,
        seed: 0,
    };
    Ok(ExperimentConfig {
        dataset,
        mode,
        attack: attack_kind,
        goal,
        fake_fraction: merge.get(attack.fake_fraction, "fake-fraction", defaults.fake_fraction)?,
        fake_label_rate: merge.get(
            attack.fake_label_rate,
            "fake-label-rate",
            defaults.fake_label_rate,
        )?,
        budget_per_fake: merge.get(
            attack.budget_per_fake,
            "budget-per-fake",
            defaults.budget_per_fake,
        )?,
        ratio,
        gan,
        train,
        retrain_lr: merge.get(common.retrain_lr, "retrain-lr", defaults.retrain_lr)?,
        retrain_epochs: merge.get(common.retrain_epochs, "retrain-epochs", defaults.retrain_epochs)?,
        seeds,
        eval_mode,
        init_feature_density: merge.get_opt(attack.init_feature_density, "init-feature-density")?,
        init_edges_per_fake: merge.get(
            attack.init_edges_per_fake,
            "init-edges-per-fake",
            defaults.init_edges_per_fake,
        )?,
        measure_f1: attack.f1 || merge.get(None::<bool>, "f1", false)?,
        single_pairs_per_seed: merge.get(attack.single_pairs, "single-pairs", defaults.single_pairs_per_seed)?,
    })
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let merge = Merge::load(&args.common.config)?;
    let cfg = experiment_config(&args.common, &AttackFlags::default(), &merge)?;
    let seed = *cfg.seeds.first().unwrap_or(&0);
    let prep = harness::prepare(&cfg, seed)?;
    let acc = fakenodes::accuracy(&prep.clean_logits.view(), &prep.graph);
    println!(
        "dataset={} n={} d={} classes={} normalization={} seed={seed}",
        cfg.dataset.name(),
        prep.graph.num_nodes(),
        prep.graph.num_features(),
        prep.graph.num_classes(),
        cfg.mode.name()
    );
    println!("test accuracy: {acc:.4}");
    if let Some(out) = args.out {
        prep.model.save(&out)?;
        println!("model written to {}", out.display());
    }
    if let Some(dir) = args.save_graph {
        data::save_graph(&prep.graph, &dir)?;
        println!("graph written to {}", dir.display());
    }
    Ok(())
}

fn cmd_attack(args: AttackArgs) -> Result<()> {
    let merge = Merge::load(&args.common.config)?;
    let cfg = experiment_config(&args.common, &args.attack, &merge)?;
    println!("config digest: {}", cfg.digest());

    let record = match cfg.goal {
        GoalKind::TargetedSingle { .. } => {
            let report = harness::run_targeted_single(&cfg)?;
            println!(
                "pairs={} mean edges/fake={:.2} mean features/fake={:.2}",
                report.pairs, report.mean_edges_per_fake, report.mean_features_per_fake
            );
            report.record
        }
        _ => harness::run(&cfg)?,
    };
    let metric_name = match cfg.goal {
        GoalKind::NonTargeted => "accuracy",
        _ => "success rate",
    };
    println!(
        "clean {metric_name}: {:.4}   attacked {metric_name} ({}): {:.4} ± {:.4}",
        record.clean_mean(),
        cfg.eval_mode.name(),
        record.mean,
        record.stddev
    );
    if let Some(f1) = record.f1_mean() {
        println!("detectability F1: {f1:.4}");
    }

    if args.degree_analysis {
        let buckets = harness::run_degree_analysis(&cfg)?;
        println!("degree buckets (clean degree -> flip rate):");
        for b in buckets {
            let hi = if b.max_degree == usize::MAX {
                "+".to_string()
            } else {
                format!("-{}", b.max_degree)
            };
            println!(
                "  {}{}: nodes={} flip_rate={:.4}",
                b.min_degree, hi, b.nodes, b.flip_rate
            );
        }
    }

    if let Some(dir) = args.out_dir {
        std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
            path: dir.clone(),
            source: e,
        })?;
        let rows = harness::result_rows(&record, None);
        harness::write_results_csv(&dir.join("results.csv"), &rows)?;
        // Re-run the first seed to persist its attacked graph and trace.
        let (attacked, trace) = rerun_first_seed(&cfg)?;
        data::save_augmented(&attacked, &dir.join("attacked"))?;
        if let Some(trace) = trace {
            trace.write_csv(&dir.join("trace.csv"))?;
        }
        println!("artifacts written to {}", dir.display());
    }
    Ok(())
}

/// Reproduce the first seed's attack to export its artifacts.
fn rerun_first_seed(
    cfg: &ExperimentConfig,
) -> Result<(fakenodes::AugmentedGraph, Option<fakenodes::AttackTrace>)> {
    use fakenodes::objective::Budget;
    let seed = *cfg.seeds.first().unwrap_or(&0);
    let prep = harness::prepare(cfg, seed)?;
    let goal = match &cfg.goal {
        GoalKind::NonTargeted => fakenodes::AttackGoal::non_targeted(prep.graph.labels()),
        _ => {
            let mut rng = harness::derive_rng(seed, harness::ROLE_TARGETS);
            use rand::Rng;
            let classes = prep.graph.num_classes();
            let targets: Vec<(usize, usize)> = (0..prep.graph.num_nodes())
                .map(|i| {
                    let y = prep.graph.labels()[i];
                    let mut t = rng.random_range(0..classes.saturating_sub(1).max(1));
                    if classes > 1 && t >= y {
                        t += 1;
                    }
                    (i, t.min(classes - 1))
                })
                .collect();
            fakenodes::AttackGoal::targeted(targets)?
        }
    };
    let m = (cfg.fake_fraction * prep.graph.num_nodes() as f64).ceil() as usize;
    let budget = Budget::new(cfg.budget_per_fake * m, cfg.ratio)?;
    let mut aug = fakenodes::AugmentedGraph::new(prep.graph.clone(), m);
    let density = cfg
        .init_feature_density
        .unwrap_or_else(|| prep.graph.feature_density());
    let mut rng = harness::derive_rng(seed, harness::ROLE_FAKE_FEATURES);
    aug.randomize_fake_features(density, &mut rng);
    match cfg.attack {
        AttackKind::Greedy => {
            let (a, t) = fakenodes::greedy_attack(aug, &prep.model, &goal, &budget)?;
            Ok((a, Some(t)))
        }
        AttackKind::GreedyGan => {
            let mut gcfg = cfg.gan.clone();
            gcfg.seed = harness::derive_u64(seed, harness::ROLE_ATTACK);
            let (a, _, t) =
                fakenodes::gan::greedy_gan_attack(aug, &prep.model, &goal, &budget, &gcfg)?;
            Ok((a, Some(t)))
        }
        AttackKind::Random => {
            let a = fakenodes::random_attack(
                aug,
                &budget,
                harness::derive_u64(seed, harness::ROLE_ATTACK),
            )?;
            Ok((a, None))
        }
    }
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let aug = data::load_augmented(&args.graph_dir)?;
    let model = gcn::GcnModel::load(&args.model)?;
    let eval_mode = EvalMode::parse(args.eval_mode.as_deref().unwrap_or("evasion"))?;
    let merge = Merge::load(&args.common.config)?;
    let mut cfg = experiment_config(&args.common, &AttackFlags::default(), &merge)?;
    cfg.eval_mode = eval_mode;
    cfg.mode = model.mode;

    let graph = aug.base().clone();
    let clean_logits = gcn::forward_graph(&model, &graph)?.logits;
    let prep = harness::Prepared {
        graph,
        model,
        clean_logits,
    };
    let goal = fakenodes::AttackGoal::non_targeted(prep.graph.labels());
    let clean = fakenodes::accuracy(&prep.clean_logits.view(), &prep.graph);
    let metric = harness::evaluate_attacked(&cfg, &prep, &aug, &goal)?;
    println!(
        "graph={} fakes={} eval={} clean accuracy={clean:.4} attacked accuracy={metric:.4}",
        args.graph_dir.display(),
        aug.num_fake(),
        eval_mode.name()
    );
    if args.f1 && aug.num_fake() > 0 {
        let x_fake = aug.x_fake_matrix();
        let f1 = fakenodes::gan::detectability_f1(
            &x_fake.view(),
            &prep.graph.features().view(),
            args.seed.unwrap_or(0),
        )?;
        println!("detectability F1: {f1:.4}");
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let merge = Merge::load(&args.common.config)?;
    let cfg = experiment_config(&args.common, &args.attack, &merge)?;
    let parse_f64_points = |raw: &str| -> Result<Vec<f64>> {
        raw.split(',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("bad axis point `{t}`: {e}")))
            })
            .collect()
    };
    let axis = match args.axis.as_str() {
        "fake-fraction" => match &args.points {
            Some(p) => SweepAxis::FakeFraction(parse_f64_points(p)?),
            None => SweepAxis::default_fake_fraction(),
        },
        "label-rate" => match &args.points {
            Some(p) => SweepAxis::LabelRate(parse_f64_points(p)?),
            None => SweepAxis::default_label_rate(),
        },
        "budget" => {
            let pts = match &args.points {
                Some(p) => parse_f64_points(p)?.into_iter().map(|v| v as usize).collect(),
                None => vec![5, 10, 20, 40],
            };
            SweepAxis::BudgetPerFake(pts)
        }
        "gan-c" => match &args.points {
            Some(p) => SweepAxis::GanC(parse_f64_points(p)?),
            None => SweepAxis::GanC(vec![0.0, 0.1, 1.0, 10.0]),
        },
        other => {
            return Err(Error::Config(format!(
                "unknown axis `{other}` (expected fake-fraction|label-rate|budget|gan-c)"
            )))
        }
    };

    let points = harness::sweep(&cfg, &axis)?;
    let out_dir = args.out_dir.unwrap_or_else(|| PathBuf::from("sweep-out"));
    std::fs::create_dir_all(&out_dir).map_err(|e| Error::Io {
        path: out_dir.clone(),
        source: e,
    })?;
    let mut rows = Vec::new();
    let mut curve = Vec::new();
    println!("{:>12}  {:>8}  {:>8}", axis.name(), "mean", "stddev");
    for p in &points {
        rows.extend(harness::result_rows(&p.record, Some((axis.name(), p.axis_value))));
        curve.push(harness::CurvePoint {
            x: p.axis_value,
            mean: p.record.mean,
            stddev: p.record.stddev,
        });
        println!(
            "{:>12}  {:>8.4}  {:>8.4}",
            p.axis_value, p.record.mean, p.record.stddev
        );
    }
    harness::write_results_csv(&out_dir.join("results.csv"), &rows)?;
    harness::write_plot_csv(
        &out_dir.join(format!("plot_{}.csv", axis.name())),
        &curve,
    )?;
    println!("results written to {}", out_dir.display());
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let summary = harness::summarize_results_csv(&args.results)?;
    println!(
        "{:<16} {:<10} {:<10} {:<10} {:<15} {:<9} {:>5} {:>8} {:>8} {:>8} {:>6}",
        "digest", "dataset", "norm", "attack", "goal", "eval", "seeds", "clean", "mean", "std", "f1"
    );
    let mut out_rows = vec![
        "digest,dataset,normalization,attack,goal,eval_mode,axis,axis_value,seeds,clean_mean,attacked_mean,attacked_std,f1_mean"
            .to_string(),
    ];
    for s in &summary {
        println!(
            "{:<16} {:<10} {:<10} {:<10} {:<15} {:<9} {:>5} {:>8.4} {:>8.4} {:>8.4} {:>6}",
            s.digest,
            s.dataset,
            s.normalization,
            s.attack,
            s.goal,
            s.eval_mode,
            s.seeds,
            s.clean_mean,
            s.attacked_mean,
            s.attacked_std,
            s.f1_mean.map(|v| format!("{v:.3}")).unwrap_or_default()
        );
        out_rows.push(format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            s.digest,
            s.dataset,
            s.normalization,
            s.attack,
            s.goal,
            s.eval_mode,
            s.axis,
            s.axis_value,
            s.seeds,
            s.clean_mean,
            s.attacked_mean,
            s.attacked_std,
            s.f1_mean.map(|v| v.to_string()).unwrap_or_default()
        ));
    }
    let out = args.out.unwrap_or_else(|| {
        args.results
            .parent()
            .unwrap_or(Path::new("."))
            .join("summary.csv")
    });
    std::fs::write(&out, out_rows.join("\n") + "\n").map_err(|e| Error::Io {
        path: out.clone(),
        source: e,
    })?;
    println!("summary written to {}", out.display());
    Ok(())
}
