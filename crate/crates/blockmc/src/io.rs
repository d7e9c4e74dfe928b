//! JSON file formats and report serialization.
//!
//! All probabilities in files and reports are exact `"num/den"` literals;
//! no floating point appears anywhere. Emitted JSON is deterministic:
//! object keys are sorted and table entries follow ascending configuration
//! index.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::bmc::{BlockKernel, BmcSpec};
use crate::chains::{ChainSpec, VertexTimeMap};
use crate::classify::{ClassReport, Verdict, Witness};
use crate::error::{Error, Result};
use crate::measure::{
    config_count, config_from_index, Alphabet, Configuration, JointMeasure, Symbol,
};
use crate::rational::{format_ratio, parse_ratio, Rational};
use crate::tree::{RootedTree, VertexSet};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeFile {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    root: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableEntryFile {
    config: BTreeMap<String, Symbol>,
    p: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureFile {
    alphabet: usize,
    tree: TreeFile,
    table: Vec<TableEntryFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelFile {
    vertex: String,
    rows: BTreeMap<String, Vec<TableEntryFile>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BmcFile {
    alphabet: usize,
    tree: TreeFile,
    initial: BTreeMap<String, String>,
    kernels: Vec<KernelFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainFile {
    alphabet: usize,
    initial: BTreeMap<String, String>,
    #[serde(rename = "P")]
    transition: Vec<Vec<String>>,
    #[serde(default)]
    time_map: Option<BTreeMap<String, usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TimeMapFile {
    time_map: BTreeMap<String, usize>,
}

fn from_json<'a, T: Deserialize<'a>>(s: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn build_tree(f: &TreeFile) -> Result<RootedTree> {
    let lookup = |label: &str| -> Result<usize> {
        f.vertices
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Parse(format!("unknown vertex label {label:?}")))
    };
    let edges: Vec<(usize, usize)> = f
        .edges
        .iter()
        .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
        .collect::<Result<_>>()?;
    let root = lookup(&f.root)?;
    RootedTree::with_labels(f.vertices.clone(), &edges, root)
}

/// Configuration from a label -> symbol object; must assign exactly `domain`.
fn build_config(
    tree: &RootedTree,
    raw: &BTreeMap<String, Symbol>,
    domain: &VertexSet,
    q: usize,
    what: &str,
) -> Result<Configuration> {
    let mut cfg = Configuration::empty();
    for (label, &sym) in raw {
        let v = tree
            .vertex_by_label(label)
            .ok_or_else(|| Error::Parse(format!("{what}: unknown vertex label {label:?}")))?;
        if sym >= q {
            return Err(Error::Parse(format!(
                "{what}: symbol {sym} out of alphabet of size {q}"
            )));
        }
        if !domain.contains(&v) {
            return Err(Error::Parse(format!(
                "{what}: vertex {label:?} outside the domain"
            )));
        }
        cfg.insert(v, sym);
    }
    if cfg.len() != domain.len() {
        return Err(Error::Parse(format!(
            "{what}: configuration covers {} of {} required vertices",
            cfg.len(),
            domain.len()
        )));
    }
    Ok(cfg)
}

/// Distribution over symbols from a sparse `{"sym": "num/den"}` object;
/// missing symbols get probability zero.
fn build_distribution(
    raw: &BTreeMap<String, String>,
    q: usize,
    what: &str,
) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::from_integer(0.into()); q];
    for (key, lit) in raw {
        let sym: usize = key
            .parse()
            .map_err(|_| Error::Parse(format!("{what}: bad symbol key {key:?}")))?;
        if sym >= q {
            return Err(Error::Parse(format!(
                "{what}: symbol {sym} out of alphabet of size {q}"
            )));
        }
        out[sym] = parse_ratio(lit).map_err(|e| Error::Parse(format!("{what}: {e}")))?;
    }
    Ok(out)
}

pub fn parse_tree(s: &str) -> Result<RootedTree> {
    let f: TreeFile = from_json(s, "tree")?;
    build_tree(&f)
}

pub fn parse_measure(s: &str) -> Result<JointMeasure> {
    let f: MeasureFile = from_json(s, "measure")?;
    let tree = build_tree(&f.tree)?;
    let alphabet = Alphabet::new(f.alphabet)?;
    let q = alphabet.size();
    let all = tree.vertex_set();
    let size = config_count(&all, q);
    let mut table: Vec<Option<Rational>> = vec![None; size];
    for (i, entry) in f.table.iter().enumerate() {
        let what = format!("measure table entry {i}");
        let cfg = build_config(&tree, &entry.config, &all, q, &what)?;
        let idx = crate::measure::config_index(&all, &cfg, q);
        let p = parse_ratio(&entry.p).map_err(|e| Error::Parse(format!("{what}: {e}")))?;
        if table[idx].replace(p).is_some() {
            return Err(Error::Parse(format!("{what}: duplicate configuration")));
        }
    }
    let missing = table.iter().filter(|e| e.is_none()).count();
    if missing > 0 {
        return Err(Error::Parse(format!(
            "measure table covers {} of {size} configurations",
            size - missing
        )));
    }
    JointMeasure::new(
        tree,
        alphabet,
        table.into_iter().map(Option::unwrap).collect(),
    )
}

pub fn parse_bmc(s: &str) -> Result<BmcSpec> {
    let f: BmcFile = from_json(s, "bmc spec")?;
    let tree = build_tree(&f.tree)?;
    let alphabet = Alphabet::new(f.alphabet)?;
    let q = alphabet.size();
    let initial = build_distribution(&f.initial, q, "initial distribution")?;
    let mut kernels = Vec::new();
    for kf in &f.kernels {
        let x = tree
            .vertex_by_label(&kf.vertex)
            .ok_or_else(|| Error::Parse(format!("kernel: unknown vertex label {:?}", kf.vertex)))?;
        let block = tree.children(x)?;
        let width = config_count(&block, q);
        let mut rows = vec![vec![Rational::from_integer(0.into()); width]; q];
        let mut seen = vec![vec![false; width]; q];
        for (key, entries) in &kf.rows {
            let sym: usize = key.parse().map_err(|_| {
                Error::Parse(format!("kernel at {:?}: bad symbol key {key:?}", kf.vertex))
            })?;
            if sym >= q {
                return Err(Error::Parse(format!(
                    "kernel at {:?}: symbol {sym} out of alphabet of size {q}",
                    kf.vertex
                )));
            }
            for (i, entry) in entries.iter().enumerate() {
                let what = format!("kernel at {:?}, row {sym}, entry {i}", kf.vertex);
                let cfg = build_config(&tree, &entry.config, &block, q, &what)?;
                let idx = crate::measure::config_index(&block, &cfg, q);
                if seen[sym][idx] {
                    return Err(Error::Parse(format!("{what}: duplicate configuration")));
                }
                seen[sym][idx] = true;
                rows[sym][idx] =
                    parse_ratio(&entry.p).map_err(|e| Error::Parse(format!("{what}: {e}")))?;
            }
        }
        for (sym, row_seen) in seen.iter().enumerate() {
            if row_seen.iter().any(|s| !s) {
                return Err(Error::Parse(format!(
                    "kernel at {:?}, row {sym}: must list all {width} block configurations",
                    kf.vertex
                )));
            }
        }
        kernels.push(BlockKernel::new(x, block, rows, alphabet)?);
    }
    BmcSpec::new(tree, alphabet, initial, kernels)
}

pub struct ParsedChain {
    pub spec: ChainSpec,
    /// Raw label -> time map, if the file carries one.
    pub time_map: Option<BTreeMap<String, usize>>,
}

pub fn parse_chain(s: &str) -> Result<ParsedChain> {
    let f: ChainFile = from_json(s, "chain")?;
    let alphabet = Alphabet::new(f.alphabet)?;
    let q = alphabet.size();
    let initial = build_distribution(&f.initial, q, "chain initial distribution")?;
    if f.transition.len() != q {
        return Err(Error::Parse(format!(
            "transition matrix has {} rows, expected {q}",
            f.transition.len()
        )));
    }
    let mut transition = Vec::with_capacity(q);
    for (i, row) in f.transition.iter().enumerate() {
        if row.len() != q {
            return Err(Error::Parse(format!(
                "transition row {i} has {} entries, expected {q}",
                row.len()
            )));
        }
        transition.push(
            row.iter()
                .map(|lit| {
                    parse_ratio(lit).map_err(|e| Error::Parse(format!("transition row {i}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(ParsedChain {
        spec: ChainSpec::new(alphabet, initial, transition)?,
        time_map: f.time_map,
    })
}

pub fn parse_time_map(s: &str) -> Result<BTreeMap<String, usize>> {
    let f: TimeMapFile = from_json(s, "time map")?;
    Ok(f.time_map)
}

/// Resolve a label -> time object against a tree.
pub fn time_map_for_tree(
    tree: &RootedTree,
    raw: &BTreeMap<String, usize>,
) -> Result<VertexTimeMap> {
    let mut times = vec![None; tree.vertex_count()];
    for (label, &t) in raw {
        let v = tree
            .vertex_by_label(label)
            .ok_or_else(|| Error::Parse(format!("time map: unknown vertex label {label:?}")))?;
        times[v] = Some(t);
    }
    if let Some(v) = times.iter().position(Option::is_none) {
        return Err(Error::Parse(format!(
            "time map: vertex {:?} has no time index",
            tree.label(v)
        )));
    }
    VertexTimeMap::new(tree, times.into_iter().map(Option::unwrap).collect())
}

pub fn tree_to_value(t: &RootedTree) -> Value {
    json!({
        "vertices": t.labels(),
        "edges": t.edge_list()
            .iter()
            .map(|&(a, b)| json!([t.label(a), t.label(b)]))
            .collect::<Vec<_>>(),
        "root": t.label(t.root()),
    })
}

fn config_to_value(cfg: &Configuration, tree: &RootedTree) -> Value {
    let map: serde_json::Map<String, Value> = cfg
        .iter()
        .map(|(v, s)| (tree.label(v).to_string(), json!(s)))
        .collect();
    Value::Object(map)
}

/// Full measure file, entries in ascending configuration-index order.
pub fn measure_to_json(m: &JointMeasure) -> String {
    let tree = m.tree();
    let q = m.alphabet().size();
    let all = tree.vertex_set();
    let table: Vec<Value> = m
        .table()
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            let cfg = config_from_index(&all, idx, q);
            json!({"config": config_to_value(&cfg, tree), "p": format_ratio(p)})
        })
        .collect();
    let value = json!({
        "alphabet": q,
        "tree": tree_to_value(tree),
        "table": table,
    });
    pretty(&value)
}

fn witness_to_value(w: &Witness, tree: &RootedTree) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("kind".into(), json!(w.kind.as_str()));
    if let Some(x) = w.vertex {
        obj.insert("vertex".into(), json!(tree.label(x)));
    }
    if let Some(subtree) = &w.subtree {
        let labels: Vec<&str> = subtree.iter().map(|&v| tree.label(v)).collect();
        obj.insert("subtree".into(), json!(labels));
    }
    obj.insert("target".into(), config_to_value(&w.target, tree));
    obj.insert("given_lhs".into(), config_to_value(&w.given_lhs, tree));
    obj.insert("given_rhs".into(), config_to_value(&w.given_rhs, tree));
    obj.insert("lhs".into(), json!(format_ratio(&w.lhs)));
    obj.insert("rhs".into(), json!(format_ratio(&w.rhs)));
    Value::Object(obj)
}

pub fn verdict_to_value(v: &Verdict, tree: &RootedTree) -> Value {
    json!({
        "holds": v.holds,
        "witness": v.witness.as_ref().map(|w| witness_to_value(w, tree)),
        "skipped_null_branches": v.skipped_null_branches,
    })
}

/// Classification report; key order is fixed by the sorted-map JSON encoder.
pub fn report_to_json(r: &ClassReport, tree: &RootedTree) -> String {
    let roots: serde_json::Map<String, Value> = r
        .per_root
        .iter()
        .map(|(&root, verdict)| {
            (
                tree.label(root).to_string(),
                verdict_to_value(verdict, tree),
            )
        })
        .collect();
    let value = json!({
        "roots": Value::Object(roots),
        "is_bmc_all_roots": r.is_bmc_all_roots,
        "mc": verdict_to_value(&r.is_mc, tree),
        "mrf": verdict_to_value(&r.is_mrf, tree),
        "cond_indep": verdict_to_value(&r.cond_indep, tree),
        "positivity": r.positivity,
        "inclusion_chain_ok": true,
        "skipped_null_branches": r.skipped_null_branches,
    });
    pretty(&value)
}

/// Single-root check report.
pub fn obmc_report_to_json(root_label: &str, v: &Verdict, tree: &RootedTree) -> String {
    let value = json!({
        "root": root_label,
        "verdict": verdict_to_value(v, tree),
    });
    pretty(&value)
}

pub fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}
