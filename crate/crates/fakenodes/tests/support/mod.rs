//! Shared test oracle: an independent dense implementation of the model and
//! finite-difference gradients.
//!
//! Everything here recomputes results from definitions — dense matrices,
//! explicit loops, real-valued adjacency relaxation — and deliberately
//! avoids the library's sparse forward, assemble and gradient paths so it
//! can stand as a second route for checking them.

#![allow(dead_code)]

use fakenodes::gcn::GcnModel;
use fakenodes::graph::{AugmentedGraph, Direction, FlipCoord, Graph, NormalizationMode};
use fakenodes::objective::AttackGoal;
use ndarray::{Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense block assembly straight from the definition:
/// `A' = [[A, B^T], [B, C]]`, `X' = [X; X_fake]`.
pub fn dense_blocks(aug: &AugmentedGraph) -> (Array2<f64>, Array2<f64>) {
    let base = aug.base();
    let n = base.num_nodes();
    let m = aug.num_fake();
    let d = base.num_features();
    let total = n + m;
    let mut a = Array2::zeros((total, total));
    for u in 0..n {
        for &v in base.neighbors(u) {
            a[[u, v as usize]] = 1.0;
        }
    }
    for u in 0..m {
        for v in 0..n {
            if aug.b_entry(u, v) {
                a[[n + u, v]] = 1.0;
                a[[v, n + u]] = 1.0;
            }
        }
        for w in 0..m {
            if aug.c_entry(u, w) {
                a[[n + u, n + w]] = 1.0;
            }
        }
    }
    let mut x = Array2::zeros((total, d));
    for i in 0..n {
        for j in 0..d {
            x[[i, j]] = base.features()[[i, j]];
        }
    }
    for u in 0..m {
        for j in 0..d {
            if aug.x_fake_entry(u, j) {
                x[[n + u, j]] = 1.0;
            }
        }
    }
    (a, x)
}

/// `Â` for a real-valued adjacency (the continuous relaxation used by
/// finite differences): `Ã = A' + I`, `D̃` its row sums.
pub fn dense_normalize(a: &ArrayView2<f64>, mode: NormalizationMode) -> Array2<f64> {
    let n = a.nrows();
    let mut tilde = a.to_owned();
    for i in 0..n {
        tilde[[i, i]] += 1.0;
    }
    let deg: Vec<f64> = (0..n).map(|i| tilde.row(i).sum()).collect();
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if tilde[[i, j]] != 0.0 {
                out[[i, j]] = match mode {
                    NormalizationMode::RowWise => tilde[[i, j]] / deg[i],
                    NormalizationMode::Symmetric => tilde[[i, j]] / (deg[i] * deg[j]).sqrt(),
                };
            }
        }
    }
    out
}

/// Straight-line evaluation of the two-layer model on dense inputs.
pub fn dense_logits(model: &GcnModel, a: &ArrayView2<f64>, x: &ArrayView2<f64>) -> Array2<f64> {
    let ahat = dense_normalize(a, model.mode);
    let h1 = ahat.dot(x).dot(&model.w0).mapv(|v: f64| v.max(0.0));
    ahat.dot(&h1).dot(&model.w1)
}

/// Intermediate pre-activations, for conditioning checks.
pub fn dense_h1_pre(model: &GcnModel, a: &ArrayView2<f64>, x: &ArrayView2<f64>) -> Array2<f64> {
    let ahat = dense_normalize(a, model.mode);
    ahat.dot(x).dot(&model.w0)
}

/// Objective recomputed with explicit per-node loops.
pub fn brute_objective(goal: &AttackGoal, logits: &ArrayView2<f64>) -> f64 {
    match goal {
        AttackGoal::NonTargeted { labels } => {
            let mut total = 0.0;
            for (i, &y) in labels.iter().enumerate() {
                let mut mx = f64::NEG_INFINITY;
                for &v in logits.row(i) {
                    if v > mx {
                        mx = v;
                    }
                }
                total += mx - logits[[i, y]];
            }
            total
        }
        AttackGoal::Targeted { targets } => {
            let mut total = 0.0;
            for &(i, t) in targets {
                let mut mx = f64::NEG_INFINITY;
                for &v in logits.row(i) {
                    if v > mx {
                        mx = v;
                    }
                }
                total += logits[[i, t]] - mx;
            }
            total
        }
    }
}

/// Central finite difference of the objective for a joint symmetric edge
/// perturbation of `A'[p][q]` and `A'[q][p]`.
pub fn fd_edge_grad(
    model: &GcnModel,
    a: &Array2<f64>,
    x: &Array2<f64>,
    goal: &AttackGoal,
    p: usize,
    q: usize,
    h: f64,
) -> f64 {
    let mut plus = a.clone();
    plus[[p, q]] += h;
    plus[[q, p]] += h;
    let mut minus = a.clone();
    minus[[p, q]] -= h;
    minus[[q, p]] -= h;
    let jp = brute_objective(goal, &dense_logits(model, &plus.view(), &x.view()).view());
    let jm = brute_objective(goal, &dense_logits(model, &minus.view(), &x.view()).view());
    (jp - jm) / (2.0 * h)
}

/// Central finite difference of the objective for one feature entry.
pub fn fd_feature_grad(
    model: &GcnModel,
    a: &Array2<f64>,
    x: &Array2<f64>,
    goal: &AttackGoal,
    node: usize,
    dim: usize,
    h: f64,
) -> f64 {
    let mut plus = x.clone();
    plus[[node, dim]] += h;
    let mut minus = x.clone();
    minus[[node, dim]] -= h;
    let jp = brute_objective(goal, &dense_logits(model, &a.view(), &plus.view()).view());
    let jm = brute_objective(goal, &dense_logits(model, &a.view(), &minus.view()).view());
    (jp - jm) / (2.0 * h)
}

/// Relative error with a floor that absorbs finite-difference noise around
/// zero gradients.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / f64::max(1e-6, f64::max(a.abs(), b.abs()))
}

/// Random graph: edge probability 0.3, feature density 0.4, uniform labels,
/// random disjoint masks.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, d: usize, classes: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < 0.3 {
                edges.push((i, j));
            }
        }
    }
    let features = Array2::from_shape_fn((n, d), |_| {
        if rng.random::<f64>() < 0.4 {
            1.0
        } else {
            0.0
        }
    });
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
    let mut train = vec![false; n];
    let mut test = vec![false; n];
    for i in 0..n {
        if rng.random::<f64>() < 0.3 {
            train[i] = true;
        } else {
            test[i] = true;
        }
    }
    Graph::new(&edges, features, labels, classes, train, test).unwrap()
}

/// Random augmentation with roughly `fill` density in every fake block.
pub fn random_aug(rng: &mut ChaCha8Rng, graph: &Graph, m: usize, fill: f64) -> AugmentedGraph {
    let n = graph.num_nodes();
    let d = graph.num_features();
    let mut aug = AugmentedGraph::new(graph.clone(), m);
    for u in 0..m {
        for v in 0..n {
            if rng.random::<f64>() < fill {
                aug.flip(FlipCoord::Edge { a: n + u, b: v }, Direction::Add)
                    .unwrap();
            }
        }
        for w in (u + 1)..m {
            if rng.random::<f64>() < fill {
                aug.flip(FlipCoord::Edge { a: n + u, b: n + w }, Direction::Add)
                    .unwrap();
            }
        }
        for j in 0..d {
            if rng.random::<f64>() < fill {
                aug.flip(FlipCoord::Feature { node: n + u, dim: j }, Direction::Add)
                    .unwrap();
            }
        }
    }
    aug
}

/// Random goal over the real nodes of a graph.
pub fn random_goal(rng: &mut ChaCha8Rng, graph: &Graph, targeted: bool) -> AttackGoal {
    if targeted {
        let classes = graph.num_classes();
        let targets: Vec<(usize, usize)> = (0..graph.num_nodes())
            .filter(|_| true)
            .map(|i| (i, rng.random_range(0..classes)))
            .collect();
        AttackGoal::targeted(targets).unwrap()
    } else {
        AttackGoal::non_targeted(graph.labels())
    }
}

/// Reject instances whose gradients are not cleanly testable: pre-activation
/// entries near the ReLU kink or per-node argmax margins small enough for a
/// finite-difference step to cross.
pub fn well_conditioned(model: &GcnModel, a: &Array2<f64>, x: &Array2<f64>) -> bool {
    let h1_pre = dense_h1_pre(model, &a.view(), &x.view());
    if h1_pre.iter().any(|v| v.abs() < 1e-5) {
        return false;
    }
    let logits = dense_logits(model, &a.view(), &x.view());
    for row in logits.rows() {
        let mut sorted: Vec<f64> = row.to_vec();
        sorted.sort_by(|p, q| q.partial_cmp(p).unwrap());
        if sorted.len() >= 2 && (sorted[0] - sorted[1]).abs() < 1e-3 {
            return false;
        }
    }
    true
}

/// Replay a plain-greedy trace, checking every flip against a brute-force
/// finite-difference gradient recomputed at that step: the chosen
/// coordinate must be the best eligible candidate of its block family
/// (numerical ties tolerated), and the recorded analytic gradient must
/// match the finite difference.
pub fn check_trace_against_fd_oracle(
    mut aug: AugmentedGraph,
    model: &GcnModel,
    goal: &AttackGoal,
    trace: &fakenodes::AttackTrace,
) {
    use fakenodes::graph::Block;
    let n = aug.base().num_nodes();
    let m = aug.num_fake();
    let d = aug.base().num_features();
    let h = 1e-4;
    let tie_tol = 1e-6;

    for (idx, step) in trace.steps.iter().enumerate() {
        let (a, x) = dense_blocks(&aug);
        let mut candidates: Vec<((Block, usize, usize), f64)> = Vec::new();
        match step.block {
            Block::B | Block::C => {
                for u in 0..m {
                    for v in 0..n {
                        if !aug.b_entry(u, v) {
                            let g = fd_edge_grad(model, &a, &x, goal, n + u, v, h);
                            candidates.push(((Block::B, u, v), g));
                        }
                    }
                }
                for u in 0..m {
                    for w in (u + 1)..m {
                        if !aug.c_entry(u, w) {
                            let g = fd_edge_grad(model, &a, &x, goal, n + u, n + w, h);
                            candidates.push(((Block::C, u, w), g));
                        }
                    }
                }
            }
            Block::XFake => {
                for u in 0..m {
                    for j in 0..d {
                        if !aug.x_fake_entry(u, j) {
                            let g = fd_feature_grad(model, &a, &x, goal, n + u, j, h);
                            candidates.push(((Block::XFake, u, j), g));
                        }
                    }
                }
            }
        }
        let (best_coord, best_g) = candidates
            .iter()
            .fold(None::<((Block, usize, usize), f64)>, |acc, &(c, g)| match acc {
                Some((_, bg)) if g <= bg => acc,
                _ => Some((c, g)),
            })
            .expect("no eligible candidate in a block the attack flipped");

        let chosen = (step.block, step.row, step.col);
        let chosen_g = candidates
            .iter()
            .find(|(c, _)| *c == chosen)
            .map(|&(_, g)| g)
            .expect("trace flipped an ineligible coordinate");
        if chosen != best_coord {
            assert!(
                (best_g - chosen_g).abs() <= tie_tol * f64::max(1.0, best_g.abs()),
                "step {idx}: trace chose {chosen:?} (fd {chosen_g}) but oracle prefers \
                 {best_coord:?} (fd {best_g})"
            );
        }
        // Sanity on the recorded analytic value. Loose: unscreened finite
        // differences may cross a ReLU kink; value precision is covered by
        // the dedicated gradient-correctness check.
        assert!(
            rel_err(step.grad, chosen_g) < 1e-2,
            "step {idx}: recorded grad {} vs fd {chosen_g}",
            step.grad
        );

        let coord = match step.block {
            Block::B => FlipCoord::Edge { a: n + step.row, b: step.col },
            Block::C => FlipCoord::Edge { a: n + step.row, b: n + step.col },
            Block::XFake => FlipCoord::Feature { node: n + step.row, dim: step.col },
        };
        aug.flip(coord, Direction::Add).unwrap();
    }
}

/// One full gradient-correctness case: every fake-block coordinate of a
/// random instance checked against central finite differences. Returns the
/// worst relative error seen.
pub fn gradient_check_case(seed: u64, mode: NormalizationMode, targeted: bool) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (graph, aug, model, goal) = loop {
        let n = rng.random_range(4..=10);
        let d = rng.random_range(2..=8);
        let classes = rng.random_range(2..=4);
        let m = rng.random_range(1..=3);
        let graph = random_graph(&mut rng, n, d, classes);
        let aug = random_aug(&mut rng, &graph, m, 0.3);
        let model_seed = rng.random::<u64>();
        let model = {
            let mut model =
                GcnModel::init(d, rng.random_range(2..=5), classes, mode, model_seed).unwrap();
            // Spread the weights so logit margins are rarely tiny.
            model.w0.mapv_inplace(|v| v * 3.0);
            model.w1.mapv_inplace(|v| v * 3.0);
            model
        };
        let goal = random_goal(&mut rng, &graph, targeted);
        let (a, x) = dense_blocks(&aug);
        if well_conditioned(&model, &a, &x) {
            break (graph, aug, model, goal);
        }
    };

    let n = graph.num_nodes();
    let m = aug.num_fake();
    let (a, x) = dense_blocks(&aug);
    let grads = fakenodes::input_gradients(&model, &aug, &goal).unwrap();
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for u in 0..m {
        for v in 0..n {
            let fd = fd_edge_grad(&model, &a, &x, &goal, n + u, v, h);
            worst = worst.max(rel_err(grads.b[[u, v]], fd));
        }
        for w in (u + 1)..m {
            let fd = fd_edge_grad(&model, &a, &x, &goal, n + u, n + w, h);
            worst = worst.max(rel_err(grads.c[[u, w]], fd));
        }
        for j in 0..graph.num_features() {
            let fd = fd_feature_grad(&model, &a, &x, &goal, n + u, j, h);
            worst = worst.max(rel_err(grads.x[[u, j]], fd));
        }
    }
    worst
}
