//! Fake-node injection attacks on two-layer graph convolutional networks.
//!
//! The library trains a two-layer GCN for semi-supervised node
//! classification, then attacks it by inserting fake nodes whose edges and
//! features are chosen by greedy discrete optimization over exact input
//! gradients. Two attacks are provided: plain greedy insertion, and a
//! discriminator-guided variant that trades attack strength for fake
//! features that are harder to tell apart from real ones.
//!
//! Entry points:
//! - [`graph`]: graph containers, fake-node augmentation, normalization.
//! - [`gcn`]: forward pass, training, input gradients.
//! - [`objective`]: attack objectives, budgets, metrics.
//! - [`greedy`]: budgeted greedy attack and the random baseline.
//! - [`gan`]: discriminator co-training and the detectability metric.
//! - [`data`]: dataset loaders, synthetic graphs, on-disk formats.
//! - [`harness`]: end-to-end experiment runners and CSV reports.
//!
//! The `examples/` directory has one runnable example per capability; the
//! `fakenodes` binary exposes the same machinery as a small CLI.

pub mod data;
pub mod error;
pub mod gan;
pub mod gcn;
pub mod graph;
pub mod greedy;
pub mod harness;
pub mod objective;

pub use error::{Error, Result};
pub use gcn::{forward, input_gradients, train, train_from, GcnModel, InputGradients, TrainConfig};
pub use graph::{
    assemble, normalize, Assembled, AugmentedGraph, Block, Direction, FlipCoord, Graph,
    NormalizationMode,
};
pub use greedy::{greedy_attack, random_attack, AttackTrace, TraceStep};
pub use objective::{
    accuracy, nontargeted_objective, success_metrics, success_rate, targeted_objective,
    AttackGoal, Budget, Ratio, SuccessMetric,
};
