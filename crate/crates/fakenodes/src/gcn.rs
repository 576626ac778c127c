//! Two-layer GCN: forward pass, supervised training, and exact gradients of
//! scalar logit objectives with respect to the fake blocks.
//!
//! The model is `Z = softmax(Â σ(Â X' W0) W1)` with `σ = ReLU`. Edge
//! gradients treat a flip as a joint symmetric perturbation of both mirror
//! entries of `A'` and differentiate through the degree terms of `Â`, not
//! just the touched entries. Feature gradients are plain backpropagation.

use ndarray::{s, Array2, ArrayView2, Axis};
use ndarray::parallel::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{assemble, Assembled, AugmentedGraph, Direction, FlipCoord, NormalizationMode};
use crate::objective::AttackGoal;

/// Trained two-layer GCN weights plus the normalization they were trained
/// under.
#[derive(Debug, Clone, PartialEq)]
pub struct GcnModel {
    pub w0: Array2<f64>,
    pub w1: Array2<f64>,
    pub mode: NormalizationMode,
    pub seed: u64,
}

impl GcnModel {
    pub fn hidden(&self) -> usize {
        self.w0.ncols()
    }

    pub fn num_features(&self) -> usize {
        self.w0.nrows()
    }

    pub fn num_classes(&self) -> usize {
        self.w1.ncols()
    }

    /// Glorot-uniform initialization, deterministic in the seed.
    pub fn init(d: usize, hidden: usize, classes: usize, mode: NormalizationMode, seed: u64) -> Result<Self> {
        if hidden == 0 {
            return Err(Error::Config("hidden width must be at least 1".into()));
        }
        if d == 0 || classes == 0 {
            return Err(Error::Config("zero-sized weight matrix".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |rows: usize, cols: usize| {
            let bound = (6.0 / (rows + cols) as f64).sqrt();
            Array2::from_shape_fn((rows, cols), |_| rng.random_range(-bound..bound))
        };
        Ok(GcnModel {
            w0: draw(d, hidden),
            w1: draw(hidden, classes),
            mode,
            seed,
        })
    }

    /// Write the model as a text tensor dump. Floats use the shortest
    /// round-trip decimal form, so saved models are bit-stable.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = String::new();
        buf.push_str("gcn-model v1\n");
        buf.push_str(&format!("mode {}\n", self.mode.name()));
        buf.push_str(&format!("seed {}\n", self.seed));
        buf.push_str(&format!(
            "dims {} {} {}\n",
            self.num_features(),
            self.hidden(),
            self.num_classes()
        ));
        for mat in [&self.w0, &self.w1] {
            for row in mat.rows() {
                let line: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
                buf.push_str(&line.join(" "));
                buf.push('\n');
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

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let parse_err = |line: usize, msg: String| Error::Parse {
            file: path.to_path_buf(),
            line,
            msg,
        };
        let mut lines = text.lines().enumerate();
        let mut expect = |what: &str| {
            lines
                .next()
                .ok_or_else(|| parse_err(0, format!("missing {what}")))
        };
        let (ln, header) = expect("header")?;
        if header != "gcn-model v1" {
            return Err(parse_err(ln + 1, format!("bad header `{header}`")));
        }
        let (ln, mode_line) = expect("mode")?;
        let mode = NormalizationMode::parse(
            mode_line
                .strip_prefix("mode ")
                .ok_or_else(|| parse_err(ln + 1, "expected `mode ...`".into()))?,
        )?;
        let (ln, seed_line) = expect("seed")?;
        let seed: u64 = seed_line
            .strip_prefix("seed ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(ln + 1, "expected `seed <u64>`".into()))?;
        let (ln, dims_line) = expect("dims")?;
        let dims: Vec<usize> = dims_line
            .strip_prefix("dims ")
            .map(|s| s.split_whitespace().filter_map(|t| t.parse().ok()).collect())
            .unwrap_or_default();
        if dims.len() != 3 {
            return Err(parse_err(ln + 1, "expected `dims <d> <h> <L>`".into()));
        }
        let (d, h, classes) = (dims[0], dims[1], dims[2]);
        let mut read_matrix = |rows: usize, cols: usize| -> Result<Array2<f64>> {
            let mut out = Array2::zeros((rows, cols));
            for r in 0..rows {
                let (ln, line) = lines
                    .next()
                    .ok_or_else(|| parse_err(0, "unexpected end of weight rows".into()))?;
                let vals: Vec<f64> = line
                    .split_whitespace()
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| parse_err(ln + 1, format!("bad float: {e}")))?;
                if vals.len() != cols {
                    return Err(parse_err(
                        ln + 1,
                        format!("expected {cols} values, found {}", vals.len()),
                    ));
                }
                for (c, v) in vals.into_iter().enumerate() {
                    out[[r, c]] = v;
                }
            }
            Ok(out)
        };
        let w0 = read_matrix(d, h)?;
        let w1 = read_matrix(h, classes)?;
        Ok(GcnModel { w0, w1, mode, seed })
    }
}

/// Training hyperparameters: plain full-batch gradient descent with L2
/// penalty on the first layer.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub weight_decay: f64,
    pub hidden: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.5,
            epochs: 300,
            weight_decay: 5e-4,
            hidden: 16,
            seed: 0,
        }
    }
}

/// All intermediates of one forward pass. `Â` itself is recoverable from
/// the assembled graph via [`crate::graph::normalize`]; the trace records
/// the degrees and mode that defined it.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub mode: NormalizationMode,
    pub degrees: Vec<f64>,
    pub h1_pre: Array2<f64>,
    pub h1: Array2<f64>,
    pub logits: Array2<f64>,
    pub probs: Array2<f64>,
}

/// Sparse application of the normalized adjacency.
pub(crate) struct SparseNorm<'a> {
    adj: &'a [Vec<u32>],
    pub deg: Vec<f64>,
    mode: NormalizationMode,
}

impl<'a> SparseNorm<'a> {
    pub fn new(adj: &'a [Vec<u32>], mode: NormalizationMode) -> Self {
        let deg = adj.iter().map(|nb| nb.len() as f64 + 1.0).collect();
        SparseNorm { adj, deg, mode }
    }

    /// `Â · rhs`
    pub fn mul(&self, rhs: &ArrayView2<f64>) -> Array2<f64> {
        self.mul_impl(rhs, false)
    }

    /// `Âᵀ · rhs` (identical to `mul` in symmetric mode)
    pub fn mul_t(&self, rhs: &ArrayView2<f64>) -> Array2<f64> {
        self.mul_impl(rhs, matches!(self.mode, NormalizationMode::RowWise))
    }

    fn mul_impl(&self, rhs: &ArrayView2<f64>, transpose: bool) -> Array2<f64> {
        let n = self.adj.len();
        let mut out = Array2::zeros((n, rhs.ncols()));
        out.axis_iter_mut(Axis(0))
            .into_par_iter()
            .enumerate()
            .for_each(|(i, mut row)| {
                let di = self.deg[i];
                row.scaled_add(self.mode.weight(di, di), &rhs.row(i));
                for &j in &self.adj[i] {
                    let j = j as usize;
                    let w = if transpose {
                        self.mode.weight(self.deg[j], di)
                    } else {
                        self.mode.weight(di, self.deg[j])
                    };
                    row.scaled_add(w, &rhs.row(j));
                }
            });
        out
    }
}

/// Row-chunked parallel matrix product `a · b`.
pub(crate) fn par_dot(a: &ArrayView2<f64>, b: &ArrayView2<f64>) -> Array2<f64> {
    let n = a.nrows();
    let mut out = Array2::zeros((n, b.ncols()));
    if n == 0 || b.ncols() == 0 {
        return out;
    }
    let threads = rayon::current_num_threads().max(1);
    let chunk = n.div_ceil(threads * 4).max(16);
    out.axis_chunks_iter_mut(Axis(0), chunk)
        .into_par_iter()
        .zip(a.axis_chunks_iter(Axis(0), chunk).into_par_iter())
        .for_each(|(mut oc, ac)| {
            oc.assign(&ac.dot(b));
        });
    out
}

fn relu(x: &Array2<f64>) -> Array2<f64> {
    x.mapv(|v| if v > 0.0 { v } else { 0.0 })
}

fn softmax_rows(logits: &ArrayView2<f64>) -> Array2<f64> {
    let mut out = logits.to_owned();
    for mut row in out.rows_mut() {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        row.mapv_inplace(|v| (v - max).exp());
        let sum: f64 = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
    out
}

fn check_finite(x: &Array2<f64>, layer: &'static str) -> Result<()> {
    if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::Numeric {
            layer,
            detail: format!("non-finite value {bad}"),
        });
    }
    Ok(())
}

/// Full forward pass with all intermediates retained.
pub fn forward(model: &GcnModel, asm: &Assembled) -> Result<ForwardTrace> {
    if asm.num_features() != model.num_features() {
        return Err(Error::Structure(format!(
            "graph has {} features but model expects {}",
            asm.num_features(),
            model.num_features()
        )));
    }
    let norm = SparseNorm::new(asm.adj(), model.mode);
    let xw0 = par_dot(&asm.features().view(), &model.w0.view());
    let h1_pre = norm.mul(&xw0.view());
    check_finite(&h1_pre, "h1_pre")?;
    let h1 = relu(&h1_pre);
    let m1 = par_dot(&h1.view(), &model.w1.view());
    let logits = norm.mul(&m1.view());
    check_finite(&logits, "logits")?;
    let probs = softmax_rows(&logits.view());
    check_finite(&probs, "softmax")?;
    Ok(ForwardTrace {
        mode: model.mode,
        degrees: norm.deg,
        h1_pre,
        h1,
        logits,
        probs,
    })
}

/// Train a fresh model on the labeled nodes of an assembled graph.
pub fn train(
    asm: &Assembled,
    labeled: &[(usize, usize)],
    num_classes: usize,
    mode: NormalizationMode,
    cfg: &TrainConfig,
) -> Result<GcnModel> {
    let init = GcnModel::init(asm.num_features(), cfg.hidden, num_classes, mode, cfg.seed)?;
    train_from(init, asm, labeled, cfg)
}

/// Continue training an existing model (used by poisoning retrains).
pub fn train_from(
    mut model: GcnModel,
    asm: &Assembled,
    labeled: &[(usize, usize)],
    cfg: &TrainConfig,
) -> Result<GcnModel> {
    if cfg.epochs == 0 {
        return Err(Error::Config("training requested with zero epochs".into()));
    }
    if !(cfg.learning_rate > 0.0) {
        return Err(Error::Config(format!(
            "learning rate {} must be positive",
            cfg.learning_rate
        )));
    }
    if labeled.is_empty() {
        return Err(Error::Config("empty labeled set".into()));
    }
    let classes = model.num_classes();
    let total = asm.num_nodes();
    for &(i, y) in labeled {
        if i >= total {
            return Err(Error::Config(format!("labeled node {i} outside graph")));
        }
        if y >= classes {
            return Err(Error::Config(format!(
                "label {y} out of range [0, {classes})"
            )));
        }
    }

    let norm = SparseNorm::new(asm.adj(), model.mode);
    let ax = norm.mul(&asm.features().view());
    let count = labeled.len() as f64;

    for _ in 0..cfg.epochs {
        let h1_pre = par_dot(&ax.view(), &model.w0.view());
        let h1 = relu(&h1_pre);
        let ah1 = norm.mul(&h1.view());
        let logits = par_dot(&ah1.view(), &model.w1.view());
        let probs = softmax_rows(&logits.view());

        let mut g_logits = Array2::zeros((total, classes));
        for &(i, y) in labeled {
            let mut row = g_logits.row_mut(i);
            row.assign(&probs.row(i));
            row[y] -= 1.0;
            row.mapv_inplace(|v| v / count);
        }

        let d_w1 = par_dot(&ah1.t(), &g_logits.view());
        let t = par_dot(&g_logits.view(), &model.w1.t());
        let mut u2 = norm.mul_t(&t.view());
        ndarray::Zip::from(&mut u2).and(&h1_pre).for_each(|g, &pre| {
            if pre <= 0.0 {
                *g = 0.0;
            }
        });
        let mut d_w0 = par_dot(&ax.t(), &u2.view());
        d_w0.scaled_add(cfg.weight_decay, &model.w0);

        model.w0.scaled_add(-cfg.learning_rate, &d_w0);
        model.w1.scaled_add(-cfg.learning_rate, &d_w1);
    }
    check_finite(&model.w0, "w0")?;
    check_finite(&model.w1, "w1")?;
    Ok(model)
}

/// Gradients of a scalar objective with respect to the three fake blocks.
#[derive(Debug, Clone)]
pub struct InputGradients {
    /// `m x n`: fake-to-real edge gradients.
    pub b: Array2<f64>,
    /// `m x m`: fake-to-fake edge gradients (symmetric, zero diagonal).
    pub c: Array2<f64>,
    /// `m x d`: fake feature gradients.
    pub x: Array2<f64>,
}

/// One gradient evaluation: objective value, logits, and fake-block
/// gradients, all consistent with the same forward pass.
pub(crate) struct StepEval {
    pub logits: Array2<f64>,
    pub value: f64,
    pub grads: InputGradients,
}

/// Incremental attack-side state: the augmentation, its assembled view, and
/// the `X' W0` cache kept in sync across flips. Single writer.
pub(crate) struct Engine<'m> {
    pub model: &'m GcnModel,
    pub aug: AugmentedGraph,
    pub asm: Assembled,
    xw0: Array2<f64>,
}

impl<'m> Engine<'m> {
    pub fn new(model: &'m GcnModel, aug: AugmentedGraph) -> Result<Self> {
        let asm = assemble(&aug)?;
        if asm.num_features() != model.num_features() {
            return Err(Error::Structure(format!(
                "graph has {} features but model expects {}",
                asm.num_features(),
                model.num_features()
            )));
        }
        let xw0 = par_dot(&asm.features().view(), &model.w0.view());
        Ok(Engine {
            model,
            aug,
            asm,
            xw0,
        })
    }

    /// Flip a coordinate in both the augmentation and the assembled caches.
    pub fn apply(&mut self, coord: FlipCoord, dir: Direction) -> Result<()> {
        self.aug.flip(coord, dir)?;
        self.asm.apply(coord, dir);
        if let FlipCoord::Feature { node, dim } = coord {
            let sign = match dir {
                Direction::Add => 1.0,
                Direction::Drop => -1.0,
            };
            let w0_row = self.model.w0.row(dim);
            self.xw0.row_mut(node).scaled_add(sign, &w0_row);
        }
        Ok(())
    }

    /// Forward pass, objective value, and full fake-block gradients.
    pub fn eval(&self, goal: &AttackGoal) -> Result<StepEval> {
        let norm = SparseNorm::new(self.asm.adj(), self.model.mode);
        let h1_pre = norm.mul(&self.xw0.view());
        check_finite(&h1_pre, "h1_pre")?;
        let h1 = relu(&h1_pre);
        let m1 = par_dot(&h1.view(), &self.model.w1.view());
        let logits = norm.mul(&m1.view());
        check_finite(&logits, "logits")?;

        let value = goal.value(&logits.view())?;
        let u1 = goal.logit_gradient(&logits.view())?;

        let t = par_dot(&u1.view(), &self.model.w1.t());
        let mut u2 = norm.mul_t(&t.view());
        ndarray::Zip::from(&mut u2).and(&h1_pre).for_each(|g, &pre| {
            if pre <= 0.0 {
                *g = 0.0;
            }
        });

        let grads = fake_block_gradients(self, &norm, &u1, &m1, &u2)?;
        Ok(StepEval {
            logits,
            value,
            grads,
        })
    }
}

/// Assemble the rank-structured `dJ/dÂ` factors into per-coordinate edge
/// gradients and the fake feature gradient.
///
/// `dJ/dÂ = u1 v1ᵀ + u2 v2ᵀ` with `v1 = H1 W1` and `v2 = X' W0`; an edge
/// flip perturbs two mirror entries of `A'` and both endpoint degrees.
fn fake_block_gradients(
    eng: &Engine,
    norm: &SparseNorm,
    u1: &Array2<f64>,
    v1: &Array2<f64>,
    u2: &Array2<f64>,
) -> Result<InputGradients> {
    let n = eng.asm.n_real;
    let m = eng.asm.m_fake;
    let d = eng.asm.num_features();
    let total = n + m;
    let v2 = &eng.xw0;
    let deg = &norm.deg;
    let mode = eng.model.mode;

    // Feature gradient: rows n.. of Âᵀ u2 W0ᵀ.
    let w = norm.mul_t(&u2.view());
    let g_x = if m > 0 {
        par_dot(&w.slice(s![n.., ..]), &eng.model.w0.t())
    } else {
        Array2::zeros((0, d))
    };

    if m == 0 {
        return Ok(InputGradients {
            b: Array2::zeros((0, n)),
            c: Array2::zeros((0, 0)),
            x: g_x,
        });
    }

    // S restricted to the blocks the scan needs.
    let u1f = u1.slice(s![n.., ..]);
    let u1r = u1.slice(s![..n, ..]);
    let v1f = v1.slice(s![n.., ..]);
    let v1r = v1.slice(s![..n, ..]);
    let u2f = u2.slice(s![n.., ..]);
    let u2r = u2.slice(s![..n, ..]);
    let v2f = v2.slice(s![n.., ..]);
    let v2r = v2.slice(s![..n, ..]);

    // sb1[u][v] = S[n+u, v], sb2[u][v] = S[v, n+u]
    let mut sb1 = par_dot(&u1f, &v1r.t().view());
    sb1 += &par_dot(&u2f, &v2r.t().view());
    let mut sb2 = par_dot(&v1f, &u1r.t().view());
    sb2 += &par_dot(&v2f, &u2r.t().view());
    // sc[u][w] = S[n+u, n+w]
    let mut sc = par_dot(&u1f, &v1f.t().view());
    sc += &par_dot(&u2f, &v2f.t().view());

    // Per-row aggregates capturing the degree dependence of Â.
    let s_entry = |i: usize, j: usize| -> f64 {
        u1.row(i).dot(&v1.row(j)) + u2.row(i).dot(&v2.row(j))
    };
    let mut row_agg = vec![0.0; total];
    match mode {
        NormalizationMode::RowWise => {
            // rowdot[i] = sum_j Ã_ij S_ij
            row_agg
                .par_iter_mut()
                .enumerate()
                .for_each(|(i, out)| {
                    let mut acc = s_entry(i, i);
                    for &j in &eng.asm.adj()[i] {
                        acc += s_entry(i, j as usize);
                    }
                    *out = acc;
                });
        }
        NormalizationMode::Symmetric => {
            // wrow[i] = sum_j Ã_ij (S_ij + S_ji) t_j
            row_agg
                .par_iter_mut()
                .enumerate()
                .for_each(|(i, out)| {
                    let ti = deg[i].powf(-0.5);
                    let mut acc = 2.0 * s_entry(i, i) * ti;
                    for &j in &eng.asm.adj()[i] {
                        let j = j as usize;
                        acc += (s_entry(i, j) + s_entry(j, i)) * deg[j].powf(-0.5);
                    }
                    *out = acc;
                });
        }
    }

    let combine = |s_pq: f64, s_qp: f64, p: usize, q: usize| -> f64 {
        match mode {
            NormalizationMode::RowWise => {
                s_pq / deg[p] + s_qp / deg[q]
                    - row_agg[p] / (deg[p] * deg[p])
                    - row_agg[q] / (deg[q] * deg[q])
            }
            NormalizationMode::Symmetric => {
                let tp = deg[p].powf(-0.5);
                let tq = deg[q].powf(-0.5);
                (s_pq + s_qp) * tp * tq
                    - 0.5 * tp.powi(3) * row_agg[p]
                    - 0.5 * tq.powi(3) * row_agg[q]
            }
        }
    };

    let mut g_b = Array2::zeros((m, n));
    g_b.axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(u, mut row)| {
            let p = n + u;
            for v in 0..n {
                row[v] = combine(sb1[[u, v]], sb2[[u, v]], p, v);
            }
        });

    let mut g_c = Array2::zeros((m, m));
    for u in 0..m {
        for w_idx in (u + 1)..m {
            let g = combine(sc[[u, w_idx]], sc[[w_idx, u]], n + u, n + w_idx);
            g_c[[u, w_idx]] = g;
            g_c[[w_idx, u]] = g;
        }
    }

    Ok(InputGradients { b: g_b, c: g_c, x: g_x })
}

/// Gradients of the objective with respect to `B`, `C` and `X_fake` at the
/// augmentation's current state.
pub fn input_gradients(
    model: &GcnModel,
    aug: &AugmentedGraph,
    goal: &AttackGoal,
) -> Result<InputGradients> {
    let engine = Engine::new(model, aug.clone())?;
    Ok(engine.eval(goal)?.grads)
}

/// Forward pass on a graph with no augmentation.
pub fn forward_graph(model: &GcnModel, graph: &crate::graph::Graph) -> Result<ForwardTrace> {
    forward(model, &graph.as_assembled())
}
