//! Graph representations: the immutable original graph, the fake-node
//! augmentation blocks, and adjacency normalization.
//!
//! An attack never touches the original graph. All attacker-controlled state
//! lives in the three fake blocks of [`AugmentedGraph`]: edges between fake
//! and real nodes (`B`), edges among fake nodes (`C`), and fake feature rows
//! (`X_fake`). The assembled graph stacks them into
//! `A' = [[A, B^T], [B, C]]` and `X' = [X; X_fake]`.

use ndarray::Array2;
use rand::Rng;

use crate::error::{Error, Result};

/// How the self-loop-augmented adjacency is scaled before aggregation.
///
/// Both variants add a self loop first (`Ã = A' + I`, `D̃` its row sums).
/// `RowWise` divides each row by its degree; `Symmetric` scales by inverse
/// square-root degrees on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationMode {
    RowWise,
    Symmetric,
}

impl NormalizationMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rowwise" | "row-wise" | "row" => Ok(NormalizationMode::RowWise),
            "symmetric" | "sym" => Ok(NormalizationMode::Symmetric),
            other => Err(Error::Config(format!(
                "unknown normalization mode `{other}` (expected rowwise|symmetric)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NormalizationMode::RowWise => "rowwise",
            NormalizationMode::Symmetric => "symmetric",
        }
    }

    /// Weight of the normalized entry for self-loop degrees `deg_i`, `deg_j`.
    #[inline]
    pub(crate) fn weight(&self, deg_i: f64, deg_j: f64) -> f64 {
        match self {
            NormalizationMode::RowWise => 1.0 / deg_i,
            NormalizationMode::Symmetric => 1.0 / (deg_i * deg_j).sqrt(),
        }
    }
}

/// The original graph. Immutable once constructed.
///
/// Adjacency is stored as sorted neighbor lists (symmetric, no self loops);
/// features are a dense 0/1 matrix so they can feed matrix products directly.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    d: usize,
    num_classes: usize,
    adj: Vec<Vec<u32>>,
    features: Array2<f64>,
    labels: Vec<usize>,
    train_mask: Vec<bool>,
    test_mask: Vec<bool>,
}

impl Graph {
    /// Build a graph from an undirected edge list. Edges are symmetrized and
    /// deduplicated; self loops are rejected.
    pub fn new(
        edges: &[(usize, usize)],
        features: Array2<f64>,
        labels: Vec<usize>,
        num_classes: usize,
        train_mask: Vec<bool>,
        test_mask: Vec<bool>,
    ) -> Result<Self> {
        let n = features.nrows();
        let d = features.ncols();
        if labels.len() != n {
            return Err(Error::Structure(format!(
                "labels length {} does not match node count {}",
                labels.len(),
                n
            )));
        }
        if train_mask.len() != n || test_mask.len() != n {
            return Err(Error::Structure(format!(
                "mask length does not match node count {n}"
            )));
        }
        if num_classes == 0 {
            return Err(Error::Structure("label count must be positive".into()));
        }
        for (i, &y) in labels.iter().enumerate() {
            if y >= num_classes {
                return Err(Error::Structure(format!(
                    "label {y} of node {i} out of range [0, {num_classes})"
                )));
            }
        }
        for i in 0..n {
            if train_mask[i] && test_mask[i] {
                return Err(Error::Structure(format!(
                    "node {i} is in both train and test masks"
                )));
            }
        }
        for &x in features.iter() {
            if x != 0.0 && x != 1.0 {
                return Err(Error::Structure(format!(
                    "feature value {x} is not binary"
                )));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Structure(format!(
                    "edge ({u}, {v}) references a node outside [0, {n})"
                )));
            }
            if u == v {
                return Err(Error::Structure(format!("self loop on node {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Graph {
            n,
            d,
            num_classes,
            adj,
            features,
            labels,
            train_mask,
            test_mask,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn num_features(&self) -> usize {
        self.d
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn train_mask(&self) -> &[bool] {
        &self.train_mask
    }

    pub fn test_mask(&self) -> &[bool] {
        &self.test_mask
    }

    pub fn train_nodes(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.train_mask[i]).collect()
    }

    pub fn test_nodes(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.test_mask[i]).collect()
    }

    /// Undirected edge list with `u < v`.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                let v = v as usize;
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Fraction of nonzero feature entries, used to draw random feature rows
    /// that match the real distribution.
    pub fn feature_density(&self) -> f64 {
        let total = (self.n * self.d) as f64;
        if total == 0.0 {
            return 0.0;
        }
        self.features.iter().filter(|&&x| x != 0.0).count() as f64 / total
    }

    /// Replace both masks with a fresh stratified split: `labeled_fraction`
    /// of each class is marked train, everything else test.
    pub fn with_split<R: Rng>(mut self, labeled_fraction: f64, rng: &mut R) -> Result<Self> {
        if !(labeled_fraction > 0.0 && labeled_fraction < 1.0) {
            return Err(Error::Config(format!(
                "labeled fraction {labeled_fraction} outside (0, 1)"
            )));
        }
        let mut train = vec![false; self.n];
        for class in 0..self.num_classes {
            let mut members: Vec<usize> =
                (0..self.n).filter(|&i| self.labels[i] == class).collect();
            if members.is_empty() {
                continue;
            }
            let take = ((members.len() as f64 * labeled_fraction).round() as usize)
                .clamp(1, members.len());
            // Fisher-Yates prefix.
            for k in 0..take {
                let j = rng.random_range(k..members.len());
                members.swap(k, j);
            }
            for &i in &members[..take] {
                train[i] = true;
            }
        }
        let test: Vec<bool> = (0..self.n).map(|i| !train[i]).collect();
        self.train_mask = train;
        self.test_mask = test;
        Ok(self)
    }
}

/// Identifies one fake block of the augmentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    /// Fake-to-real edges, `m x n`.
    B,
    /// Fake-to-fake edges, `m x m`, symmetric with zero diagonal.
    C,
    /// Fake feature rows, `m x d`.
    XFake,
}

impl Block {
    pub fn name(&self) -> &'static str {
        match self {
            Block::B => "B",
            Block::C => "C",
            Block::XFake => "X_fake",
        }
    }
}

/// A coordinate an attack may flip, in assembled (global) indices.
///
/// Edges use endpoints of `A'`; feature coordinates use the row index of
/// `X'`. Coordinates that fall entirely inside the original blocks are
/// rejected by [`AugmentedGraph::flip`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipCoord {
    Edge { a: usize, b: usize },
    Feature { node: usize, dim: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Add,
    Drop,
}

impl Direction {
    pub fn name(&self) -> &'static str {
        match self {
            Direction::Add => "add",
            Direction::Drop => "drop",
        }
    }
}

/// The original graph plus attacker-controlled fake blocks.
///
/// `base` is never mutated; flips only touch `B`, `C` and `X_fake`. The
/// stored `C` keeps a zero diagonal — self loops enter only through the
/// `Ã = A' + I` step of normalization, so storing them here would count
/// them twice.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedGraph {
    base: Graph,
    m: usize,
    b: Vec<Vec<bool>>,
    c: Vec<Vec<bool>>,
    x_fake: Vec<Vec<bool>>,
    fake_labels: Vec<Option<usize>>,
    b_ones: usize,
    c_ones: usize,
    x_ones: usize,
}

impl AugmentedGraph {
    /// Augmentation with `m` fake nodes and all fake blocks zero.
    pub fn new(base: Graph, m: usize) -> Self {
        let n = base.num_nodes();
        let d = base.num_features();
        AugmentedGraph {
            base,
            m,
            b: vec![vec![false; n]; m],
            c: vec![vec![false; m]; m],
            x_fake: vec![vec![false; d]; m],
            fake_labels: vec![None; m],
            b_ones: 0,
            c_ones: 0,
            x_ones: 0,
        }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn num_fake(&self) -> usize {
        self.m
    }

    pub fn num_total(&self) -> usize {
        self.base.num_nodes() + self.m
    }

    pub fn b_entry(&self, fake: usize, real: usize) -> bool {
        self.b[fake][real]
    }

    pub fn c_entry(&self, a: usize, b: usize) -> bool {
        self.c[a][b]
    }

    pub fn x_fake_entry(&self, fake: usize, dim: usize) -> bool {
        self.x_fake[fake][dim]
    }

    pub fn fake_label(&self, fake: usize) -> Option<usize> {
        self.fake_labels[fake]
    }

    /// `(node, class)` pairs for the labeled fakes, in assembled indices.
    pub fn labeled_fakes(&self) -> Vec<(usize, usize)> {
        let n = self.base.num_nodes();
        self.fake_labels
            .iter()
            .enumerate()
            .filter_map(|(u, l)| l.map(|c| (n + u, c)))
            .collect()
    }

    pub fn set_fake_label(&mut self, fake: usize, class: Option<usize>) -> Result<()> {
        if fake >= self.m {
            return Err(Error::Structure(format!(
                "fake index {fake} out of range [0, {})",
                self.m
            )));
        }
        if let Some(c) = class {
            if c >= self.base.num_classes() {
                return Err(Error::Structure(format!(
                    "fake label {c} out of range [0, {})",
                    self.base.num_classes()
                )));
            }
        }
        self.fake_labels[fake] = class;
        Ok(())
    }

    /// Nonzero counts `(B, C, X_fake)`; edges counted once per undirected pair.
    pub fn nonzeros(&self) -> (usize, usize, usize) {
        (self.b_ones, self.c_ones, self.x_ones)
    }

    /// Classify a coordinate into its fake block, validating all flip
    /// preconditions except the current entry value.
    pub fn locate(&self, coord: FlipCoord) -> Result<(Block, usize, usize)> {
        let n = self.base.num_nodes();
        let total = n + self.m;
        match coord {
            FlipCoord::Edge { a, b } => {
                if a >= total || b >= total {
                    return Err(Error::Structure(format!(
                        "edge ({a}, {b}) outside assembled graph of {total} nodes"
                    )));
                }
                if a == b {
                    return Err(Error::Constraint(format!(
                        "edge ({a}, {a}) is on the diagonal"
                    )));
                }
                if a < n && b < n {
                    return Err(Error::Immutability(format!(
                        "edge ({a}, {b}) lies in the original adjacency block"
                    )));
                }
                if a >= n && b >= n {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    Ok((Block::C, lo - n, hi - n))
                } else {
                    let (fake, real) = if a >= n { (a - n, b) } else { (b - n, a) };
                    Ok((Block::B, fake, real))
                }
            }
            FlipCoord::Feature { node, dim } => {
                if node >= total {
                    return Err(Error::Structure(format!(
                        "feature row {node} outside assembled graph of {total} nodes"
                    )));
                }
                if dim >= self.base.num_features() {
                    return Err(Error::Structure(format!(
                        "feature dim {dim} out of range [0, {})",
                        self.base.num_features()
                    )));
                }
                if node < n {
                    return Err(Error::Immutability(format!(
                        "feature row {node} lies in the original feature block"
                    )));
                }
                Ok((Block::XFake, node - n, dim))
            }
        }
    }

    /// Current value of a fake-block coordinate.
    pub fn entry(&self, coord: FlipCoord) -> Result<bool> {
        let (block, r, c) = self.locate(coord)?;
        Ok(match block {
            Block::B => self.b[r][c],
            Block::C => self.c[r][c],
            Block::XFake => self.x_fake[r][c],
        })
    }

    /// Toggle one fake-block coordinate. Edge flips also toggle the mirror
    /// entry so the assembled adjacency stays symmetric.
    pub fn flip(&mut self, coord: FlipCoord, dir: Direction) -> Result<()> {
        let (block, r, c) = self.locate(coord)?;
        let target = match dir {
            Direction::Add => false,
            Direction::Drop => true,
        };
        let cur = match block {
            Block::B => self.b[r][c],
            Block::C => self.c[r][c],
            Block::XFake => self.x_fake[r][c],
        };
        if cur != target {
            return Err(Error::Constraint(format!(
                "{} on {}[{r}][{c}] which is already {}",
                dir.name(),
                block.name(),
                cur as u8
            )));
        }
        let new = !cur;
        match block {
            Block::B => {
                self.b[r][c] = new;
                if new {
                    self.b_ones += 1;
                } else {
                    self.b_ones -= 1;
                }
            }
            Block::C => {
                self.c[r][c] = new;
                self.c[c][r] = new;
                if new {
                    self.c_ones += 1;
                } else {
                    self.c_ones -= 1;
                }
            }
            Block::XFake => {
                self.x_fake[r][c] = new;
                if new {
                    self.x_ones += 1;
                } else {
                    self.x_ones -= 1;
                }
            }
        }
        Ok(())
    }

    /// Set each fake feature entry to 1 with probability `density`.
    pub fn randomize_fake_features<R: Rng>(&mut self, density: f64, rng: &mut R) {
        for row in &mut self.x_fake {
            for v in row.iter_mut() {
                *v = rng.random::<f64>() < density;
            }
        }
        self.x_ones = self.x_fake.iter().flatten().filter(|&&v| v).count();
    }

    /// Add `count` distinct random fake-block edges (drawn over B and C
    /// jointly), skipping coordinates that are already set.
    pub fn add_random_fake_edges<R: Rng>(&mut self, count: usize, rng: &mut R) {
        let n = self.base.num_nodes();
        let mut added = 0;
        let capacity = self.m * n + self.m.saturating_sub(1) * self.m / 2;
        let mut attempts = 0;
        while added < count && attempts < 100 * count.max(1) {
            attempts += 1;
            let fake = rng.random_range(0..self.m);
            let other = rng.random_range(0..n + self.m);
            if other == n + fake {
                continue;
            }
            let coord = FlipCoord::Edge {
                a: n + fake,
                b: other,
            };
            if self.flip(coord, Direction::Add).is_ok() {
                added += 1;
            }
            if self.b_ones + self.c_ones >= capacity {
                break;
            }
        }
    }

    /// Fake feature rows as a dense matrix.
    pub fn x_fake_matrix(&self) -> Array2<f64> {
        let d = self.base.num_features();
        let mut out = Array2::zeros((self.m, d));
        for (u, row) in self.x_fake.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                if v {
                    out[[u, i]] = 1.0;
                }
            }
        }
        out
    }

    /// Undirected fake edges in assembled indices, `p < q`.
    pub fn fake_edge_list(&self) -> Vec<(usize, usize)> {
        let n = self.base.num_nodes();
        let mut out = Vec::new();
        for u in 0..self.m {
            for v in 0..n {
                if self.b[u][v] {
                    out.push((v, n + u));
                }
            }
            for w in (u + 1)..self.m {
                if self.c[u][w] {
                    out.push((n + u, n + w));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Assembled view of an augmentation: the block adjacency `A'` as neighbor
/// lists and the stacked feature matrix `X'`.
#[derive(Debug, Clone)]
pub struct Assembled {
    pub n_real: usize,
    pub m_fake: usize,
    adj: Vec<Vec<u32>>,
    features: Array2<f64>,
}

impl Assembled {
    pub fn num_nodes(&self) -> usize {
        self.n_real + self.m_fake
    }

    pub fn num_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn adj(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Dense 0/1 adjacency, for small-graph checks.
    pub fn adjacency_dense(&self) -> Array2<f64> {
        let total = self.num_nodes();
        let mut out = Array2::zeros((total, total));
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs {
                out[[u, v as usize]] = 1.0;
            }
        }
        out
    }

    /// Apply one flip to the assembled view, mirroring
    /// [`AugmentedGraph::flip`] on an already-assembled graph.
    pub(crate) fn apply(&mut self, coord: FlipCoord, dir: Direction) {
        match coord {
            FlipCoord::Edge { a, b } => match dir {
                Direction::Add => {
                    insert_sorted(&mut self.adj[a], b as u32);
                    insert_sorted(&mut self.adj[b], a as u32);
                }
                Direction::Drop => {
                    remove_sorted(&mut self.adj[a], b as u32);
                    remove_sorted(&mut self.adj[b], a as u32);
                }
            },
            FlipCoord::Feature { node, dim } => {
                self.features[[node, dim]] = match dir {
                    Direction::Add => 1.0,
                    Direction::Drop => 0.0,
                };
            }
        }
    }
}

fn insert_sorted(v: &mut Vec<u32>, x: u32) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn remove_sorted(v: &mut Vec<u32>, x: u32) {
    if let Ok(pos) = v.binary_search(&x) {
        v.remove(pos);
    }
}

impl Graph {
    /// View the graph itself as an assembled graph with zero fake nodes.
    pub fn as_assembled(&self) -> Assembled {
        Assembled {
            n_real: self.n,
            m_fake: 0,
            adj: self.adj.clone(),
            features: self.features.clone(),
        }
    }
}

/// Assemble the block adjacency and stacked features of an augmentation.
pub fn assemble(aug: &AugmentedGraph) -> Result<Assembled> {
    let base = aug.base();
    let n = base.num_nodes();
    let m = aug.num_fake();
    let d = base.num_features();
    let total = n + m;

    let mut adj: Vec<Vec<u32>> = Vec::with_capacity(total);
    adj.extend(base.adj.iter().cloned());
    adj.resize(total, Vec::new());

    for u in 0..m {
        if aug.b[u].len() != n || aug.c[u].len() != m || aug.x_fake[u].len() != d {
            return Err(Error::Structure(format!(
                "fake block row {u} has inconsistent dimensions"
            )));
        }
        for v in 0..n {
            if aug.b[u][v] {
                adj[n + u].push(v as u32);
                adj[v].push((n + u) as u32);
            }
        }
        if aug.c[u][u] {
            return Err(Error::Structure(format!("C[{u}][{u}] is nonzero")));
        }
        for w in 0..m {
            if aug.c[u][w] != aug.c[w][u] {
                return Err(Error::Structure(format!("C[{u}][{w}] is not symmetric")));
            }
            if aug.c[u][w] {
                adj[n + u].push((n + w) as u32);
            }
        }
    }
    for row in &mut adj {
        row.sort_unstable();
    }

    let mut features = Array2::zeros((total, d));
    features
        .slice_mut(ndarray::s![..n, ..])
        .assign(base.features());
    for u in 0..m {
        for i in 0..d {
            if aug.x_fake[u][i] {
                features[[n + u, i]] = 1.0;
            }
        }
    }

    Ok(Assembled {
        n_real: n,
        m_fake: m,
        adj,
        features,
    })
}

/// Dense normalized adjacency `Â` of an assembled graph.
///
/// Row-wise mode yields rows summing to 1; symmetric mode yields a symmetric
/// matrix. Degrees are always at least 1 because of the added self loop.
pub fn normalize(asm: &Assembled, mode: NormalizationMode) -> Array2<f64> {
    let total = asm.num_nodes();
    let deg: Vec<f64> = (0..total).map(|u| asm.degree(u) as f64 + 1.0).collect();
    let mut out = Array2::zeros((total, total));
    for u in 0..total {
        out[[u, u]] = mode.weight(deg[u], deg[u]);
        for &v in &asm.adj[u] {
            let v = v as usize;
            out[[u, v]] = mode.weight(deg[u], deg[v]);
        }
    }
    out
}
