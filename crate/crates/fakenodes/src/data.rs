//! Dataset loading and on-disk formats.
//!
//! Three sources: citation datasets in the published content/cites format,
//! the crate's own native directory format, and a stochastic-block-model
//! generator for desk-scale tests. The native format is line-oriented TSV
//! with all files written in lexicographically sorted line order, so equal
//! graphs produce byte-identical directories and stable digests.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{AugmentedGraph, Direction, FlipCoord, Graph};

/// Parameters of the stochastic-block-model generator. Labels equal block
/// indices; each class lights up its own band of feature dimensions with
/// probability `feature_bias` against a low background rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub blocks: usize,
    pub per_block: usize,
    pub p_intra: f64,
    pub p_inter: f64,
    pub dim: usize,
    pub feature_bias: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            blocks: 3,
            per_block: 40,
            p_intra: 0.10,
            p_inter: 0.01,
            dim: 24,
            feature_bias: 0.4,
        }
    }
}

/// Background feature rate outside a class's own band.
const FEATURE_NOISE: f64 = 0.05;

/// Draw a stochastic-block-model graph with class-correlated binary
/// features. Masks start empty; apply [`Graph::with_split`] to label a
/// fraction.
pub fn generate(spec: &SyntheticSpec, seed: u64) -> Result<Graph> {
    if spec.blocks == 0 || spec.per_block == 0 {
        return Err(Error::Config("synthetic graph with zero nodes".into()));
    }
    if spec.dim == 0 {
        return Err(Error::Config("synthetic graph with zero feature dims".into()));
    }
    for p in [spec.p_intra, spec.p_inter, spec.feature_bias] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!("probability {p} outside [0, 1]")));
        }
    }
    let n = spec.blocks * spec.per_block;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let labels: Vec<usize> = (0..n).map(|i| i / spec.per_block).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if labels[i] == labels[j] {
                spec.p_intra
            } else {
                spec.p_inter
            };
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }

    let band = (spec.dim / spec.blocks).max(1);
    let mut features = Array2::zeros((n, spec.dim));
    for i in 0..n {
        let lo = (labels[i] * band).min(spec.dim.saturating_sub(band));
        for j in 0..spec.dim {
            let p = if j >= lo && j < lo + band {
                spec.feature_bias
            } else {
                FEATURE_NOISE
            };
            if rng.random::<f64>() < p {
                features[[i, j]] = 1.0;
            }
        }
    }

    Graph::new(
        &edges,
        features,
        labels,
        spec.blocks,
        vec![false; n],
        vec![false; n],
    )
}

/// Where a dataset comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    /// `<dir>/<name>.content` and `<dir>/<name>.cites`.
    ContentCites { name: String, dir: PathBuf },
    /// A directory in the native format (masks are taken from disk).
    NativeDir { dir: PathBuf },
    Synthetic(SyntheticSpec),
}

/// A dataset plus how to split it into labeled and test nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub source: DataSource,
    /// Split seed; `None` derives one from the per-run seed.
    pub split_seed: Option<u64>,
    pub labeled_fraction: f64,
}

impl DatasetSpec {
    pub fn new(source: DataSource) -> Self {
        DatasetSpec {
            source,
            split_seed: None,
            labeled_fraction: 0.20,
        }
    }

    pub fn synthetic(spec: SyntheticSpec) -> Self {
        DatasetSpec::new(DataSource::Synthetic(spec))
    }

    /// Short name for report rows.
    pub fn name(&self) -> String {
        match &self.source {
            DataSource::ContentCites { name, .. } => name.clone(),
            DataSource::NativeDir { dir } => dir
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "native".into()),
            DataSource::Synthetic(s) => format!("sbm{}x{}", s.blocks, s.per_block),
        }
    }
}

/// Counts of repairs applied while loading a content/cites dataset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub dangling_edges: usize,
    pub duplicate_edges: usize,
    pub self_loops: usize,
    pub binarized_values: usize,
}

/// Load a dataset and apply its split. `default_seed` is used for the
/// split when the spec does not pin one; native directories keep their
/// stored masks.
pub fn load(spec: &DatasetSpec, default_seed: u64) -> Result<Graph> {
    Ok(load_with_stats(spec, default_seed)?.0)
}

pub fn load_with_stats(spec: &DatasetSpec, default_seed: u64) -> Result<(Graph, LoadStats)> {
    let split_seed = spec.split_seed.unwrap_or(default_seed);
    match &spec.source {
        DataSource::ContentCites { name, dir } => {
            let (graph, stats) = load_content_cites(name, dir)?;
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed);
            Ok((graph.with_split(spec.labeled_fraction, &mut rng)?, stats))
        }
        DataSource::NativeDir { dir } => Ok((load_graph(dir)?, LoadStats::default())),
        DataSource::Synthetic(s) => {
            let graph = generate(s, split_seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed ^ 0x5851_f42d_4c95_7f2d);
            Ok((
                graph.with_split(spec.labeled_fraction, &mut rng)?,
                LoadStats::default(),
            ))
        }
    }
}

/// Parse `<name>.content` (one line per node: id, feature values, label
/// string) and `<name>.cites` (one cited/citing id pair per line).
/// Features are binarized, edges symmetrized and deduplicated, dangling
/// endpoints dropped. Class indices follow the lexicographic order of the
/// label strings.
pub fn load_content_cites(name: &str, dir: &Path) -> Result<(Graph, LoadStats)> {
    let content_path = dir.join(format!("{name}.content"));
    let cites_path = dir.join(format!("{name}.cites"));
    let content = read_file(&content_path)?;
    let cites = read_file(&cites_path)?;
    let mut stats = LoadStats::default();

    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut label_names: Vec<String> = Vec::new();
    let mut d = None;
    for (ln, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(Error::Parse {
                file: content_path.clone(),
                line: ln + 1,
                msg: format!("expected id, features and label, found {} fields", fields.len()),
            });
        }
        let dim = fields.len() - 2;
        match d {
            None => d = Some(dim),
            Some(expect) if expect != dim => {
                return Err(Error::Parse {
                    file: content_path.clone(),
                    line: ln + 1,
                    msg: format!("feature dimension {dim} differs from {expect}"),
                });
            }
            _ => {}
        }
        let id = fields[0].to_string();
        if ids.insert(id.clone(), rows.len()).is_some() {
            return Err(Error::Parse {
                file: content_path.clone(),
                line: ln + 1,
                msg: format!("duplicate node id {id}"),
            });
        }
        let mut row = Vec::with_capacity(dim);
        for tok in &fields[1..=dim] {
            let v: f64 = tok.parse().map_err(|e| Error::Parse {
                file: content_path.clone(),
                line: ln + 1,
                msg: format!("bad feature value `{tok}`: {e}"),
            })?;
            if v != 0.0 && v != 1.0 {
                stats.binarized_values += 1;
            }
            row.push(if v != 0.0 { 1.0 } else { 0.0 });
        }
        rows.push(row);
        label_names.push(fields[dim + 1].to_string());
    }
    let n = rows.len();
    let d = d.ok_or_else(|| Error::Parse {
        file: content_path.clone(),
        line: 0,
        msg: "empty content file".into(),
    })?;

    let mut classes: Vec<String> = label_names.clone();
    classes.sort_unstable();
    classes.dedup();
    let class_index: HashMap<&String, usize> =
        classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let labels: Vec<usize> = label_names.iter().map(|l| class_index[l]).collect();

    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    for (ln, line) in cites.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                file: cites_path.clone(),
                line: ln + 1,
                msg: format!("expected two node ids, found {}", fields.len()),
            });
        }
        let (Some(&u), Some(&v)) = (ids.get(fields[0]), ids.get(fields[1])) else {
            stats.dangling_edges += 1;
            continue;
        };
        if u == v {
            stats.self_loops += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            stats.duplicate_edges += 1;
            continue;
        }
        edges.push(key);
    }

    let mut features = Array2::zeros((n, d));
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            features[[i, j]] = v;
        }
    }
    let graph = Graph::new(
        &edges,
        features,
        labels,
        classes.len(),
        vec![false; n],
        vec![false; n],
    )?;
    Ok((graph, stats))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn sorted_lines(mut lines: Vec<String>) -> String {
    lines.sort_unstable();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

/// Files of the native graph container in digest order.
const BASE_FILES: [&str; 5] = ["meta", "edges.tsv", "features.tsv", "labels.tsv", "masks.tsv"];
const FAKE_FILES: [&str; 3] = ["fake_edges.tsv", "fake_features.tsv", "fake_labels.tsv"];

fn render_base(graph: &Graph, m: usize) -> Vec<(&'static str, String)> {
    let mut meta = String::new();
    let _ = writeln!(meta, "L\t{}", graph.num_classes());
    let _ = writeln!(meta, "d\t{}", graph.num_features());
    let _ = writeln!(meta, "m\t{m}");
    let _ = writeln!(meta, "n\t{}", graph.num_nodes());

    let edges = sorted_lines(
        graph
            .edge_list()
            .into_iter()
            .map(|(u, v)| format!("{u}\t{v}"))
            .collect(),
    );
    let mut feat_lines = Vec::new();
    for ((i, j), &v) in graph.features().indexed_iter() {
        if v != 0.0 {
            feat_lines.push(format!("{i}\t{j}\t1"));
        }
    }
    let features = sorted_lines(feat_lines);
    let labels = sorted_lines(
        graph
            .labels()
            .iter()
            .enumerate()
            .map(|(i, &y)| format!("{i}\t{y}"))
            .collect(),
    );
    let mut mask_lines = Vec::new();
    for i in 0..graph.num_nodes() {
        if graph.train_mask()[i] {
            mask_lines.push(format!("{i}\ttrain"));
        } else if graph.test_mask()[i] {
            mask_lines.push(format!("{i}\ttest"));
        }
    }
    let masks = sorted_lines(mask_lines);

    vec![
        ("meta", meta),
        ("edges.tsv", edges),
        ("features.tsv", features),
        ("labels.tsv", labels),
        ("masks.tsv", masks),
    ]
}

fn render_fake(aug: &AugmentedGraph) -> Vec<(&'static str, String)> {
    let edges = sorted_lines(
        aug.fake_edge_list()
            .into_iter()
            .map(|(p, q)| format!("{p}\t{q}"))
            .collect(),
    );
    let mut feat_lines = Vec::new();
    let d = aug.base().num_features();
    for u in 0..aug.num_fake() {
        for j in 0..d {
            if aug.x_fake_entry(u, j) {
                feat_lines.push(format!("{u}\t{j}\t1"));
            }
        }
    }
    let features = sorted_lines(feat_lines);
    let mut label_lines = Vec::new();
    for u in 0..aug.num_fake() {
        if let Some(c) = aug.fake_label(u) {
            label_lines.push(format!("{u}\t{c}"));
        }
    }
    let labels = sorted_lines(label_lines);
    vec![
        ("fake_edges.tsv", edges),
        ("fake_features.tsv", features),
        ("fake_labels.tsv", labels),
    ]
}

/// Write a graph as a native directory (no fake blocks).
pub fn save_graph(graph: &Graph, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    for (name, content) in render_base(graph, 0) {
        write_file(&dir.join(name), &content)?;
    }
    Ok(())
}

/// Write an augmentation as a native directory: the base files plus the
/// three fake-block files.
pub fn save_augmented(aug: &AugmentedGraph, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    for (name, content) in render_base(aug.base(), aug.num_fake()) {
        write_file(&dir.join(name), &content)?;
    }
    for (name, content) in render_fake(aug) {
        write_file(&dir.join(name), &content)?;
    }
    Ok(())
}

struct Meta {
    n: usize,
    d: usize,
    classes: usize,
    m: usize,
}

fn parse_meta(dir: &Path) -> Result<Meta> {
    let path = dir.join("meta");
    let text = read_file(&path)?;
    let mut vals: HashMap<&str, usize> = HashMap::new();
    for (ln, line) in text.lines().enumerate() {
        let mut it = line.split('\t');
        let (Some(key), Some(val), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse {
                file: path.clone(),
                line: ln + 1,
                msg: "expected `key<TAB>value`".into(),
            });
        };
        let v: usize = val.parse().map_err(|e| Error::Parse {
            file: path.clone(),
            line: ln + 1,
            msg: format!("bad value `{val}`: {e}"),
        })?;
        vals.insert(match key {
            "n" => "n",
            "d" => "d",
            "L" => "L",
            "m" => "m",
            other => {
                return Err(Error::Parse {
                    file: path.clone(),
                    line: ln + 1,
                    msg: format!("unknown meta key `{other}`"),
                })
            }
        }, v);
    }
    let get = |k: &str| {
        vals.get(k).copied().ok_or_else(|| Error::Parse {
            file: path.clone(),
            line: 0,
            msg: format!("missing meta key `{k}`"),
        })
    };
    Ok(Meta {
        n: get("n")?,
        d: get("d")?,
        classes: get("L")?,
        m: get("m")?,
    })
}

fn parse_indexed<const K: usize>(path: &Path) -> Result<Vec<([usize; K], Option<String>)>> {
    // Each line: K integer fields, optionally followed by one string field.
    let text = read_file(path)?;
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < K || fields.len() > K + 1 {
            return Err(Error::Parse {
                file: path.to_path_buf(),
                line: ln + 1,
                msg: format!("expected {K} or {} fields, found {}", K + 1, fields.len()),
            });
        }
        let mut nums = [0usize; K];
        for (slot, tok) in nums.iter_mut().zip(&fields[..K]) {
            *slot = tok.parse().map_err(|e| Error::Parse {
                file: path.to_path_buf(),
                line: ln + 1,
                msg: format!("bad integer `{tok}`: {e}"),
            })?;
        }
        let tail = fields.get(K).map(|s| s.to_string());
        out.push((nums, tail));
    }
    Ok(out)
}

fn load_base(dir: &Path) -> Result<(Graph, usize)> {
    let meta = parse_meta(dir)?;
    let parse_err = |file: &str, line: usize, msg: String| Error::Parse {
        file: dir.join(file),
        line,
        msg,
    };

    let mut edges = Vec::new();
    for ([u, v], tail) in parse_indexed::<2>(&dir.join("edges.tsv"))? {
        if tail.is_some() {
            return Err(parse_err("edges.tsv", 0, "unexpected third field".into()));
        }
        edges.push((u, v));
    }
    let mut features = Array2::zeros((meta.n, meta.d));
    for (ln, ([i, j, one], _)) in parse_indexed::<3>(&dir.join("features.tsv"))?
        .into_iter()
        .enumerate()
    {
        if one != 1 {
            return Err(parse_err(
                "features.tsv",
                ln + 1,
                format!("feature triplet value must be 1, found {one}"),
            ));
        }
        if i >= meta.n || j >= meta.d {
            return Err(parse_err(
                "features.tsv",
                ln + 1,
                format!("feature index ({i}, {j}) out of range"),
            ));
        }
        features[[i, j]] = 1.0;
    }
    let mut labels = vec![0usize; meta.n];
    let mut seen = vec![false; meta.n];
    for (ln, ([i, y], _)) in parse_indexed::<2>(&dir.join("labels.tsv"))?
        .into_iter()
        .enumerate()
    {
        if i >= meta.n {
            return Err(parse_err("labels.tsv", ln + 1, format!("node {i} out of range")));
        }
        labels[i] = y;
        seen[i] = true;
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(parse_err(
            "labels.tsv",
            0,
            format!("node {missing} has no label"),
        ));
    }
    let mut train = vec![false; meta.n];
    let mut test = vec![false; meta.n];
    let mask_path = dir.join("masks.tsv");
    let text = read_file(&mask_path)?;
    for (ln, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut it = line.split('\t');
        let (Some(node), Some(kind), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err("masks.tsv", ln + 1, "expected `node<TAB>train|test`".into()));
        };
        let i: usize = node.parse().map_err(|e| {
            parse_err("masks.tsv", ln + 1, format!("bad node `{node}`: {e}"))
        })?;
        if i >= meta.n {
            return Err(parse_err("masks.tsv", ln + 1, format!("node {i} out of range")));
        }
        match kind {
            "train" => train[i] = true,
            "test" => test[i] = true,
            other => {
                return Err(parse_err(
                    "masks.tsv",
                    ln + 1,
                    format!("unknown mask kind `{other}`"),
                ))
            }
        }
    }
    let graph = Graph::new(&edges, features, labels, meta.classes, train, test)?;
    Ok((graph, meta.m))
}

/// Load a native directory written by [`save_graph`].
pub fn load_graph(dir: &Path) -> Result<Graph> {
    let (graph, m) = load_base(dir)?;
    if m != 0 {
        return Err(Error::Structure(format!(
            "directory {} holds an augmented graph with m = {m}; use load_augmented",
            dir.display()
        )));
    }
    Ok(graph)
}

/// Load a native directory written by [`save_augmented`].
pub fn load_augmented(dir: &Path) -> Result<AugmentedGraph> {
    let (graph, m) = load_base(dir)?;
    let n = graph.num_nodes();
    let mut aug = AugmentedGraph::new(graph, m);
    let parse_err = |file: &str, line: usize, msg: String| Error::Parse {
        file: dir.join(file),
        line,
        msg,
    };

    for (ln, ([p, q], _)) in parse_indexed::<2>(&dir.join("fake_edges.tsv"))?
        .into_iter()
        .enumerate()
    {
        aug.flip(FlipCoord::Edge { a: p, b: q }, Direction::Add)
            .map_err(|e| parse_err("fake_edges.tsv", ln + 1, e.to_string()))?;
    }
    for (ln, ([u, j, one], _)) in parse_indexed::<3>(&dir.join("fake_features.tsv"))?
        .into_iter()
        .enumerate()
    {
        if one != 1 {
            return Err(parse_err(
                "fake_features.tsv",
                ln + 1,
                format!("feature triplet value must be 1, found {one}"),
            ));
        }
        aug.flip(FlipCoord::Feature { node: n + u, dim: j }, Direction::Add)
            .map_err(|e| parse_err("fake_features.tsv", ln + 1, e.to_string()))?;
    }
    for (ln, ([u, c], _)) in parse_indexed::<2>(&dir.join("fake_labels.tsv"))?
        .into_iter()
        .enumerate()
    {
        aug.set_fake_label(u, Some(c))
            .map_err(|e| parse_err("fake_labels.tsv", ln + 1, e.to_string()))?;
    }
    Ok(aug)
}

fn digest_sections(sections: &[(&str, String)]) -> String {
    let mut hasher = Sha256::new();
    for (name, content) in sections {
        hasher.update(name.as_bytes());
        hasher.update([0u8]);
        hasher.update(content.as_bytes());
    }
    let out = hasher.finalize();
    out.iter().fold(String::new(), |mut acc, b| {
        let _ = write!(acc, "{b:02x}");
        acc
    })
}

/// Content hash of a graph over its canonical serialization.
pub fn graph_digest(graph: &Graph) -> String {
    digest_sections(&render_base(graph, 0))
}

/// Content hash of an augmentation (base plus fake blocks and labels).
pub fn augmented_digest(aug: &AugmentedGraph) -> String {
    let mut sections = render_base(aug.base(), aug.num_fake());
    sections.extend(render_fake(aug));
    digest_sections(&sections)
}

/// File names of the native format, in digest order.
pub fn native_file_names(augmented: bool) -> Vec<&'static str> {
    let mut names: Vec<&'static str> = BASE_FILES.to_vec();
    if augmented {
        names.extend(FAKE_FILES);
    }
    names
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_is_deterministic() {
        let spec = SyntheticSpec::default();
        let g1 = generate(&spec, 5).unwrap();
        let g2 = generate(&spec, 5).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn zero_inter_probability_gives_block_diagonal() {
        let spec = SyntheticSpec {
            blocks: 2,
            per_block: 10,
            p_intra: 0.5,
            p_inter: 0.0,
            ..SyntheticSpec::default()
        };
        let g = generate(&spec, 1).unwrap();
        for (u, v) in g.edge_list() {
            assert_eq!(u / 10, v / 10, "edge ({u}, {v}) crosses blocks");
        }
    }

    #[test]
    fn zero_nodes_is_an_error() {
        let spec = SyntheticSpec {
            blocks: 0,
            ..SyntheticSpec::default()
        };
        assert!(matches!(generate(&spec, 0), Err(Error::Config(_))));
    }

    #[test]
    fn empty_edge_file_loads_isolated_nodes() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SyntheticSpec {
            blocks: 2,
            per_block: 3,
            p_intra: 0.0,
            p_inter: 0.0,
            ..SyntheticSpec::default()
        };
        let g = generate(&spec, 2).unwrap();
        save_graph(&g, dir.path()).unwrap();
        assert_eq!(
            std::fs::read_to_string(dir.path().join("edges.tsv")).unwrap(),
            ""
        );
        let back = load_graph(dir.path()).unwrap();
        assert_eq!(back.num_edges(), 0);
        assert_eq!(back, g);
    }

    #[test]
    fn digest_changes_with_content() {
        let spec = SyntheticSpec::default();
        let g = generate(&spec, 3).unwrap();
        let mut aug = AugmentedGraph::new(g.clone(), 2);
        let d0 = augmented_digest(&aug);
        aug.flip(
            FlipCoord::Feature {
                node: g.num_nodes(),
                dim: 0,
            },
            Direction::Add,
        )
        .unwrap();
        assert_ne!(d0, augmented_digest(&aug));
    }

    #[test]
    fn truncated_meta_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("meta"), "n\t3\nd\t2\n").unwrap();
        let err = load_graph(dir.path()).unwrap_err();
        match err {
            Error::Parse { file, .. } => assert!(file.ends_with("meta")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_edge_line_reports_location() {
        let dir = tempfile::tempdir().unwrap();
        let g = generate(&SyntheticSpec::default(), 1).unwrap();
        save_graph(&g, dir.path()).unwrap();
        std::fs::write(dir.path().join("edges.tsv"), "0\tx\n").unwrap();
        let err = load_graph(dir.path()).unwrap_err();
        match err {
            Error::Parse { file, line, .. } => {
                assert!(file.ends_with("edges.tsv"));
                assert_eq!(line, 1);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn hand_written_fixture_loads_to_documented_matrices() {
        // 3 real nodes on a path, 1 fake node joined to real node 2 with one
        // feature and a label.
        let dir = tempfile::tempdir().unwrap();
        let w = |name: &str, body: &str| std::fs::write(dir.path().join(name), body).unwrap();
        w("meta", "L\t2\nd\t2\nm\t1\nn\t3\n");
        w("edges.tsv", "0\t1\n1\t2\n");
        w("features.tsv", "0\t0\t1\n1\t1\t1\n2\t0\t1\n");
        w("labels.tsv", "0\t0\n1\t1\n2\t0\n");
        w("masks.tsv", "0\ttrain\n1\ttest\n2\ttest\n");
        w("fake_edges.tsv", "2\t3\n");
        w("fake_features.tsv", "0\t1\t1\n");
        w("fake_labels.tsv", "0\t1\n");
        let aug = load_augmented(dir.path()).unwrap();
        assert_eq!(aug.base().num_nodes(), 3);
        assert_eq!(aug.num_fake(), 1);
        assert!(aug.b_entry(0, 2));
        assert!(!aug.b_entry(0, 0));
        assert!(aug.x_fake_entry(0, 1));
        assert_eq!(aug.fake_label(0), Some(1));
        assert!(aug.base().has_edge(0, 1));
        assert_eq!(aug.base().labels(), &[0, 1, 0]);
    }
}
