//! Budgeted greedy fake-node attack and the random baseline.
//!
//! Each unit of budget buys one flip. Flips alternate between the edge
//! blocks (`B` and `C` jointly) and the feature block according to the
//! budget ratio, and the gradient is recomputed before every flip — a stale
//! gradient would change which coordinate wins. The plain greedy attack
//! only ever adds entries.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::path::Path;

use crate::data::augmented_digest;
use crate::error::{Error, Result};
use crate::gcn::{Engine, GcnModel, InputGradients};
use crate::graph::{AugmentedGraph, Block, Direction, FlipCoord};
use crate::objective::{AttackGoal, Budget};

/// Discriminator-related values recorded per step by the GAN attack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GanStepInfo {
    /// Combined objective after the step.
    pub phi_after: f64,
    /// Discriminator term after the step.
    pub disc_loss_after: f64,
}

/// One applied flip with the evidence that selected it.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub t: usize,
    pub block: Block,
    pub row: usize,
    pub col: usize,
    pub action: Direction,
    /// Gradient of the selection objective at the chosen coordinate.
    pub grad: f64,
    /// Best gradient of the action that was not taken (GAN add/drop rule).
    pub alt_grad: Option<f64>,
    /// The alternative action had no candidates, so this one was forced.
    pub forced: bool,
    pub j_before: f64,
    pub j_after: f64,
    pub gan: Option<GanStepInfo>,
}

/// Ordered record of an attack run plus the digest of the final graph.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackTrace {
    pub steps: Vec<TraceStep>,
    /// Set when the attack stopped before exhausting its budget.
    pub stopped_early: Option<String>,
    pub digest: String,
}

impl AttackTrace {
    pub fn units_used(&self) -> usize {
        self.steps.len()
    }

    /// One CSV row per step. GAN runs carry the extra action and
    /// objective-component columns.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let gan = self.steps.iter().any(|s| s.gan.is_some());
        let mut buf = String::new();
        if gan {
            buf.push_str("t,block,row,col,action,grad,alt_grad,forced,j_before,j_after,phi,disc_loss\n");
        } else {
            buf.push_str("t,block,row,col,grad,j_before,j_after\n");
        }
        for s in &self.steps {
            if gan {
                let (phi, l) = s
                    .gan
                    .map(|g| (g.phi_after, g.disc_loss_after))
                    .unwrap_or((f64::NAN, f64::NAN));
                let alt = s.alt_grad.map(|v| v.to_string()).unwrap_or_default();
                buf.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    s.t,
                    s.block.name(),
                    s.row,
                    s.col,
                    s.action.name(),
                    s.grad,
                    alt,
                    s.forced as u8,
                    s.j_before,
                    s.j_after,
                    phi,
                    l
                ));
            } else {
                buf.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    s.t,
                    s.block.name(),
                    s.row,
                    s.col,
                    s.grad,
                    s.j_before,
                    s.j_after
                ));
            }
        }
        let mut f = std::fs::File::create(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        f.write_all(buf.as_bytes()).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }
}

/// Which block family the current budget slot must spend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Phase {
    Edge,
    Feature,
}

/// Infinite phase schedule following the edge:feature ratio.
pub(crate) fn phase_for(step: usize, budget: &Budget) -> Phase {
    let e = budget.ratio.edges as usize;
    let f = budget.ratio.features as usize;
    if e == 0 {
        return Phase::Feature;
    }
    if f == 0 {
        return Phase::Edge;
    }
    if step % (e + f) < e {
        Phase::Edge
    } else {
        Phase::Feature
    }
}

/// Best eligible edge add: signed maximum over currently-zero `B` and `C`
/// coordinates, ties broken by lowest linear index (`B` row-major first,
/// then the upper triangle of `C`).
pub(crate) fn best_edge_add(
    grads: &InputGradients,
    aug: &AugmentedGraph,
) -> Option<(FlipCoord, Block, usize, usize, f64)> {
    let n = aug.base().num_nodes();
    let m = aug.num_fake();
    let mut best: Option<(FlipCoord, Block, usize, usize, f64)> = None;
    for u in 0..m {
        for v in 0..n {
            if !aug.b_entry(u, v) {
                let g = grads.b[[u, v]];
                if best.map_or(true, |(_, _, _, _, bg)| g > bg) {
                    best = Some((FlipCoord::Edge { a: n + u, b: v }, Block::B, u, v, g));
                }
            }
        }
    }
    for u in 0..m {
        for w in (u + 1)..m {
            if !aug.c_entry(u, w) {
                let g = grads.c[[u, w]];
                if best.map_or(true, |(_, _, _, _, bg)| g > bg) {
                    best = Some((
                        FlipCoord::Edge { a: n + u, b: n + w },
                        Block::C,
                        u,
                        w,
                        g,
                    ));
                }
            }
        }
    }
    best
}

/// Best eligible edge drop: signed minimum over currently-one coordinates.
pub(crate) fn best_edge_drop(
    grads: &InputGradients,
    aug: &AugmentedGraph,
) -> Option<(FlipCoord, Block, usize, usize, f64)> {
    let n = aug.base().num_nodes();
    let m = aug.num_fake();
    let mut best: Option<(FlipCoord, Block, usize, usize, f64)> = None;
    for u in 0..m {
        for v in 0..n {
            if aug.b_entry(u, v) {
                let g = grads.b[[u, v]];
                if best.map_or(true, |(_, _, _, _, bg)| g < bg) {
                    best = Some((FlipCoord::Edge { a: n + u, b: v }, Block::B, u, v, g));
                }
            }
        }
    }
    for u in 0..m {
        for w in (u + 1)..m {
            if aug.c_entry(u, w) {
                let g = grads.c[[u, w]];
                if best.map_or(true, |(_, _, _, _, bg)| g < bg) {
                    best = Some((
                        FlipCoord::Edge { a: n + u, b: n + w },
                        Block::C,
                        u,
                        w,
                        g,
                    ));
                }
            }
        }
    }
    best
}

pub(crate) fn best_feature_add(
    grads: &InputGradients,
    aug: &AugmentedGraph,
) -> Option<(FlipCoord, Block, usize, usize, f64)> {
    let n = aug.base().num_nodes();
    let m = aug.num_fake();
    let d = aug.base().num_features();
    let mut best: Option<(FlipCoord, Block, usize, usize, f64)> = None;
    for u in 0..m {
        for i in 0..d {
            if !aug.x_fake_entry(u, i) {
                let g = grads.x[[u, i]];
                if best.map_or(true, |(_, _, _, _, bg)| g > bg) {
                    best = Some((
                        FlipCoord::Feature { node: n + u, dim: i },
                        Block::XFake,
                        u,
                        i,
                        g,
                    ));
                }
            }
        }
    }
    best
}

pub(crate) fn best_feature_drop(
    grads: &InputGradients,
    aug: &AugmentedGraph,
) -> Option<(FlipCoord, Block, usize, usize, f64)> {
    let n = aug.base().num_nodes();
    let m = aug.num_fake();
    let d = aug.base().num_features();
    let mut best: Option<(FlipCoord, Block, usize, usize, f64)> = None;
    for u in 0..m {
        for i in 0..d {
            if aug.x_fake_entry(u, i) {
                let g = grads.x[[u, i]];
                if best.map_or(true, |(_, _, _, _, bg)| g < bg) {
                    best = Some((
                        FlipCoord::Feature { node: n + u, dim: i },
                        Block::XFake,
                        u,
                        i,
                        g,
                    ));
                }
            }
        }
    }
    best
}

/// Greedy attack with hooks: `stop` ends the run early once the logits
/// already satisfy the caller (checked before every flip), and `observe`
/// sees the logits after every applied flip.
pub(crate) fn greedy_attack_hooked(
    aug: AugmentedGraph,
    model: &GcnModel,
    goal: &AttackGoal,
    budget: &Budget,
    mut stop: impl FnMut(&Array2<f64>) -> bool,
    mut observe: impl FnMut(usize, &Array2<f64>),
) -> Result<(AugmentedGraph, AttackTrace)> {
    let mut eng = Engine::new(model, aug)?;
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut stopped_early = None;

    let mut t = 0;
    loop {
        let eval = eng.eval(goal)?;
        if let Some(last) = steps.last_mut() {
            last.j_after = eval.value;
        }
        if t > 0 {
            observe(t, &eval.logits);
        }
        if t >= budget.total {
            break;
        }
        if stop(&eval.logits) {
            stopped_early = Some("stop condition satisfied".to_string());
            break;
        }
        let phase = phase_for(t, budget);
        let pick = match phase {
            Phase::Edge => best_edge_add(&eval.grads, &eng.aug),
            Phase::Feature => best_feature_add(&eval.grads, &eng.aug),
        };
        let Some((coord, block, row, col, grad)) = pick else {
            stopped_early = Some(match phase {
                Phase::Edge => "no zero edge candidate left".to_string(),
                Phase::Feature => "no zero feature candidate left".to_string(),
            });
            break;
        };
        eng.apply(coord, Direction::Add)?;
        steps.push(TraceStep {
            t,
            block,
            row,
            col,
            action: Direction::Add,
            grad,
            alt_grad: None,
            forced: false,
            j_before: eval.value,
            j_after: f64::NAN,
            gan: None,
        });
        t += 1;
    }

    let digest = augmented_digest(&eng.aug);
    Ok((
        eng.aug,
        AttackTrace {
            steps,
            stopped_early,
            digest,
        },
    ))
}

/// Algorithm: repeatedly add the fake-block coordinate with the largest
/// objective gradient, alternating edges and features per the budget ratio,
/// until the budget is spent. Returns the attacked graph and the full trace.
pub fn greedy_attack(
    aug: AugmentedGraph,
    model: &GcnModel,
    goal: &AttackGoal,
    budget: &Budget,
) -> Result<(AugmentedGraph, AttackTrace)> {
    greedy_attack_hooked(aug, model, goal, budget, |_| false, |_, _| {})
}

/// Baseline: flip uniformly random currently-zero fake-block coordinates,
/// with the same budget accounting and phase schedule as the greedy attack.
pub fn random_attack(
    mut aug: AugmentedGraph,
    budget: &Budget,
    seed: u64,
) -> Result<AugmentedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = aug.base().num_nodes();
    let m = aug.num_fake();
    let d = aug.base().num_features();

    for t in 0..budget.total {
        match phase_for(t, budget) {
            Phase::Edge => {
                let (b_ones, c_ones, _) = aug.nonzeros();
                let zeros_b = m * n - b_ones;
                let zeros_c = m.saturating_sub(1) * m / 2 - c_ones;
                let total = zeros_b + zeros_c;
                if total == 0 {
                    break;
                }
                let mut k = rng.random_range(0..total);
                let coord = 'found: {
                    if k < zeros_b {
                        for u in 0..m {
                            for v in 0..n {
                                if !aug.b_entry(u, v) {
                                    if k == 0 {
                                        break 'found FlipCoord::Edge { a: n + u, b: v };
                                    }
                                    k -= 1;
                                }
                            }
                        }
                    } else {
                        k -= zeros_b;
                        for u in 0..m {
                            for w in (u + 1)..m {
                                if !aug.c_entry(u, w) {
                                    if k == 0 {
                                        break 'found FlipCoord::Edge { a: n + u, b: n + w };
                                    }
                                    k -= 1;
                                }
                            }
                        }
                    }
                    unreachable!("zero count inconsistent with scan");
                };
                aug.flip(coord, Direction::Add)?;
            }
            Phase::Feature => {
                let (_, _, x_ones) = aug.nonzeros();
                let total = m * d - x_ones;
                if total == 0 {
                    break;
                }
                let mut k = rng.random_range(0..total);
                let coord = 'found: {
                    for u in 0..m {
                        for i in 0..d {
                            if !aug.x_fake_entry(u, i) {
                                if k == 0 {
                                    break 'found FlipCoord::Feature { node: n + u, dim: i };
                                }
                                k -= 1;
                            }
                        }
                    }
                    unreachable!("zero count inconsistent with scan");
                };
                aug.flip(coord, Direction::Add)?;
            }
        }
    }
    Ok(aug)
}
