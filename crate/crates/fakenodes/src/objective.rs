//! Attack objectives over logits, the flip budget, and success metrics.
//!
//! Both objectives read raw logits, not softmax probabilities. The
//! non-targeted objective rewards any real node whose top score is not its
//! true label; the targeted objective penalizes every attacked node whose
//! top score is not its target.

use ndarray::{Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// What the attack tries to achieve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttackGoal {
    /// Push real nodes away from their true labels (`labels[i]` = class of
    /// real node `i`).
    NonTargeted { labels: Vec<usize> },
    /// Force each listed node to a chosen class.
    Targeted { targets: Vec<(usize, usize)> },
}

impl AttackGoal {
    pub fn non_targeted(labels: &[usize]) -> Self {
        AttackGoal::NonTargeted {
            labels: labels.to_vec(),
        }
    }

    pub fn targeted(targets: Vec<(usize, usize)>) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::Config("targeted goal with empty node set".into()));
        }
        Ok(AttackGoal::Targeted { targets })
    }

    /// Objective value on the given logits (rows cover real then fake nodes).
    pub fn value(&self, logits: &ArrayView2<f64>) -> Result<f64> {
        match self {
            AttackGoal::NonTargeted { labels } => nontargeted_objective(logits, labels),
            AttackGoal::Targeted { .. } => targeted_objective(logits, self),
        }
    }

    /// Subgradient of the objective in the logits. The `max` term uses the
    /// argmax row, ties broken by lowest class index.
    pub fn logit_gradient(&self, logits: &ArrayView2<f64>) -> Result<Array2<f64>> {
        let mut g = Array2::zeros(logits.dim());
        let classes = logits.ncols();
        match self {
            AttackGoal::NonTargeted { labels } => {
                for (i, &y) in labels.iter().enumerate() {
                    if y >= classes {
                        return Err(Error::Structure(format!(
                            "label {y} of node {i} out of range [0, {classes})"
                        )));
                    }
                    let top = argmax_row(&logits.row(i));
                    g[[i, top]] += 1.0;
                    g[[i, y]] -= 1.0;
                }
            }
            AttackGoal::Targeted { targets } => {
                for &(i, target) in targets {
                    if target >= classes {
                        return Err(Error::Structure(format!(
                            "target class {target} out of range [0, {classes})"
                        )));
                    }
                    let top = argmax_row(&logits.row(i));
                    g[[i, target]] += 1.0;
                    g[[i, top]] -= 1.0;
                }
            }
        }
        Ok(g)
    }
}

/// Row argmax with ties broken by lowest class index.
pub fn argmax_row(row: &ArrayView1<f64>) -> usize {
    let mut best = 0;
    let mut best_val = row[0];
    for (j, &v) in row.iter().enumerate().skip(1) {
        if v > best_val {
            best = j;
            best_val = v;
        }
    }
    best
}

/// Sum over real nodes of `max_j f_ij - f_{i, y_i}`. Nonnegative; zero when
/// every real node's top score is its true label.
pub fn nontargeted_objective(logits: &ArrayView2<f64>, labels: &[usize]) -> Result<f64> {
    if labels.len() > logits.nrows() {
        return Err(Error::Structure(format!(
            "{} labels but only {} logit rows",
            labels.len(),
            logits.nrows()
        )));
    }
    let classes = logits.ncols();
    let mut total = 0.0;
    for (i, &y) in labels.iter().enumerate() {
        if y >= classes {
            return Err(Error::Structure(format!(
                "label {y} of node {i} out of range [0, {classes})"
            )));
        }
        let row = logits.row(i);
        let top = argmax_row(&row);
        total += row[top] - row[y];
    }
    Ok(total)
}

/// Sum over attacked nodes of `f_{i, y*_i} - max_j f_ij`. Nonpositive; zero
/// when every attacked node's top score is its target.
pub fn targeted_objective(logits: &ArrayView2<f64>, goal: &AttackGoal) -> Result<f64> {
    let AttackGoal::Targeted { targets } = goal else {
        return Err(Error::Config(
            "targeted_objective called with a non-targeted goal".into(),
        ));
    };
    let classes = logits.ncols();
    let mut total = 0.0;
    for &(i, target) in targets {
        if i >= logits.nrows() {
            return Err(Error::Structure(format!(
                "attacked node {i} outside logit rows"
            )));
        }
        if target >= classes {
            return Err(Error::Structure(format!(
                "target class {target} out of range [0, {classes})"
            )));
        }
        let row = logits.row(i);
        let top = argmax_row(&row);
        total += row[target] - row[top];
    }
    Ok(total)
}

/// Evaluation metric for a goal: classification accuracy over real test
/// nodes for non-targeted attacks, success rate over the attacked set for
/// targeted attacks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SuccessMetric {
    Accuracy(f64),
    SuccessRate(f64),
}

impl SuccessMetric {
    pub fn value(&self) -> f64 {
        match *self {
            SuccessMetric::Accuracy(v) | SuccessMetric::SuccessRate(v) => v,
        }
    }
}

/// Fraction of test-mask real nodes classified as their true label.
pub fn accuracy(logits: &ArrayView2<f64>, graph: &Graph) -> f64 {
    let test = graph.test_nodes();
    if test.is_empty() {
        return 0.0;
    }
    let correct = test
        .iter()
        .filter(|&&i| argmax_row(&logits.row(i)) == graph.labels()[i])
        .count();
    correct as f64 / test.len() as f64
}

/// Fraction of attacked nodes classified as their target.
pub fn success_rate(logits: &ArrayView2<f64>, targets: &[(usize, usize)]) -> f64 {
    if targets.is_empty() {
        return 0.0;
    }
    let hit = targets
        .iter()
        .filter(|&&(i, t)| argmax_row(&logits.row(i)) == t)
        .count();
    hit as f64 / targets.len() as f64
}

pub fn success_metrics(
    logits: &ArrayView2<f64>,
    goal: &AttackGoal,
    graph: &Graph,
) -> SuccessMetric {
    match goal {
        AttackGoal::NonTargeted { .. } => SuccessMetric::Accuracy(accuracy(logits, graph)),
        AttackGoal::Targeted { targets } => {
            SuccessMetric::SuccessRate(success_rate(logits, targets))
        }
    }
}

/// How many edge flips and feature flips each greedy cycle performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub edges: u32,
    pub features: u32,
}

impl Default for Ratio {
    fn default() -> Self {
        Ratio {
            edges: 1,
            features: 1,
        }
    }
}

/// Total flip budget. Every edge flip (an undirected pair with its mirror)
/// and every feature flip costs one unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub total: usize,
    pub ratio: Ratio,
}

impl Budget {
    pub fn new(total: usize, ratio: Ratio) -> Result<Self> {
        if ratio.edges == 0 && ratio.features == 0 {
            return Err(Error::Config(
                "edge/feature ratio cannot be 0:0".into(),
            ));
        }
        Ok(Budget { total, ratio })
    }

    pub fn units(total: usize) -> Self {
        Budget {
            total,
            ratio: Ratio::default(),
        }
    }
}
