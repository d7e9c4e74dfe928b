//! One-dimensional Markov chains and their embeddings into tree-indexed
//! measures, plus the built-in fixtures (including the five-vertex
//! counter-example measure that is block Markov from one root but not from
//! another, and not a tree Markov chain at all).

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::bmc::{BlockKernel, BmcSpec};
use crate::error::{Error, Result};
use crate::measure::{configs, Alphabet, Configuration, JointMeasure, Symbol};
use crate::rational::{ratio, Rational};
use crate::tree::{RootedTree, VertexId};

/// Time-homogeneous finite Markov chain: initial distribution and one
/// `q x q` row-stochastic transition matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    alphabet: Alphabet,
    initial: Vec<Rational>,
    transition: Vec<Vec<Rational>>,
}

impl ChainSpec {
    pub fn new(
        alphabet: Alphabet,
        initial: Vec<Rational>,
        transition: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let q = alphabet.size();
        check_distribution(&initial, q, "initial distribution")?;
        if transition.len() != q {
            return Err(Error::InvalidChain(format!(
                "transition matrix has {} rows, expected {q}",
                transition.len()
            )));
        }
        for (i, row) in transition.iter().enumerate() {
            check_distribution(row, q, &format!("transition row {i}"))?;
        }
        Ok(ChainSpec {
            alphabet,
            initial,
            transition,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn transition(&self) -> &[Vec<Rational>] {
        &self.transition
    }

    /// Distribution of the chain at time `t`.
    pub fn marginal(&self, t: usize) -> Vec<Rational> {
        let mut m = self.initial.clone();
        for _ in 0..t {
            m = self.step(&m);
        }
        m
    }

    fn step(&self, m: &[Rational]) -> Vec<Rational> {
        let q = self.alphabet.size();
        (0..q)
            .map(|j| (0..q).map(|i| &m[i] * &self.transition[i][j]).sum())
            .collect()
    }
}

fn check_distribution(d: &[Rational], q: usize, what: &str) -> Result<()> {
    if d.len() != q {
        return Err(Error::InvalidChain(format!(
            "{what} has {} entries, expected {q}",
            d.len()
        )));
    }
    if d.iter().any(|p| p < &Rational::zero()) {
        return Err(Error::InvalidChain(format!("{what}: negative entry")));
    }
    let total: Rational = d.iter().cloned().sum();
    if !total.is_one() {
        return Err(Error::InvalidChain(format!(
            "{what} sums to {total}, expected 1"
        )));
    }
    Ok(())
}

/// Assignment of a chain time index to every vertex.
///
/// Adjacent vertices must sit at distinct times, and every time up to the
/// horizon must be read by some vertex. Edges may connect non-consecutive
/// times (the counter-example does exactly that), but a time the whole tree
/// skips would silently marginalize a chain step and is rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexTimeMap {
    times: Vec<usize>,
}

impl VertexTimeMap {
    pub fn new(tree: &RootedTree, times: Vec<usize>) -> Result<Self> {
        if times.len() != tree.vertex_count() {
            return Err(Error::NotChainEmbedding(format!(
                "time map covers {} vertices, tree has {}",
                times.len(),
                tree.vertex_count()
            )));
        }
        for &(a, b) in tree.edge_list() {
            if times[a] == times[b] {
                return Err(Error::NotChainEmbedding(format!(
                    "adjacent vertices {} and {} are both at time {}",
                    tree.label(a),
                    tree.label(b),
                    times[a]
                )));
            }
        }
        let t_max = times.iter().copied().max().unwrap_or(0);
        for t in 0..=t_max {
            if !times.contains(&t) {
                return Err(Error::NotChainEmbedding(format!(
                    "time {t} is not assigned to any vertex"
                )));
            }
        }
        Ok(VertexTimeMap { times })
    }

    pub fn time(&self, x: VertexId) -> usize {
        self.times[x]
    }

    pub fn times(&self) -> &[usize] {
        &self.times
    }

    pub fn max_time(&self) -> usize {
        self.times.iter().copied().max().unwrap_or(0)
    }
}

/// Chain law on the path of times `0..=t_max`, as a joint measure over the
/// path graph whose vertex ids are the times.
fn chain_law_on_path(spec: &ChainSpec, t_max: usize) -> JointMeasure {
    let q = spec.alphabet.size();
    let len = t_max + 1;
    let edges: Vec<_> = (0..t_max).map(|t| (t, t + 1)).collect();
    let path = RootedTree::new(len, &edges, 0).expect("path is a tree");
    let size = q.pow(len as u32);
    let mut table = Vec::with_capacity(size);
    for idx in 0..size {
        let digit = |t: usize| (idx / q.pow(t as u32)) % q;
        let mut p = spec.initial[digit(0)].clone();
        for t in 0..t_max {
            if p.is_zero() {
                break;
            }
            p *= &spec.transition[digit(t)][digit(t + 1)];
        }
        table.push(p);
    }
    JointMeasure::new(path, spec.alphabet, table).expect("chain law is a probability measure")
}

/// Law of the process that reads the chain at `map.time(v)` for each vertex:
/// the probability of a full tree configuration is the chain cylinder over
/// the assigned times, and zero when two vertices demand different symbols
/// at the same time.
pub fn embed_chain(
    spec: &ChainSpec,
    tree: &RootedTree,
    map: &VertexTimeMap,
) -> Result<JointMeasure> {
    // Revalidate against this tree; the map may have been built elsewhere.
    let map = VertexTimeMap::new(tree, map.times.clone())?;
    let q = spec.alphabet.size();
    let n = tree.vertex_count();
    let law = chain_law_on_path(spec, map.max_time());
    let used_times: crate::tree::VertexSet = map.times.iter().copied().collect();
    let proj = law.project(&used_times)?;

    let size = q.pow(n as u32);
    let mut table = Vec::with_capacity(size);
    'outer: for idx in 0..size {
        let mut by_time: BTreeMap<usize, Symbol> = BTreeMap::new();
        for v in 0..n {
            let sym = (idx / q.pow(v as u32)) % q;
            if let Some(&prev) = by_time.get(&map.times[v]) {
                if prev != sym {
                    table.push(Rational::zero());
                    continue 'outer;
                }
            } else {
                by_time.insert(map.times[v], sym);
            }
        }
        let time_cfg = Configuration::from_pairs(by_time);
        table.push(proj[crate::measure::config_index(&used_times, &time_cfg, q)].clone());
    }
    JointMeasure::new(tree.clone(), spec.alphabet, table)
}

/// The chain law on a path of `length` vertices as a block Markov spec
/// rooted at `root_pos`: kernels toward increasing time are rows of the
/// transition matrix, kernels toward decreasing time are the Bayes-reversed
/// conditionals through the chain marginals.
///
/// A reversal row at a symbol the chain cannot reach is unconstrained; it is
/// set to the uniform distribution and reported in the second component.
/// Such rows never affect the realized measure.
pub fn chain_as_bmc(
    spec: &ChainSpec,
    length: usize,
    root_pos: usize,
) -> Result<(BmcSpec, Vec<(VertexId, Symbol)>)> {
    if length == 0 {
        return Err(Error::InvalidArgument("chain length must be >= 1".into()));
    }
    if root_pos >= length {
        return Err(Error::InvalidArgument(format!(
            "root position {root_pos} out of range 0..{length}"
        )));
    }
    let q = spec.alphabet.size();
    let edges: Vec<_> = (0..length.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    let tree = RootedTree::new(length, &edges, root_pos)?;
    let marginals: Vec<Vec<Rational>> = (0..length).map(|t| spec.marginal(t)).collect();

    let mut kernels = Vec::new();
    let mut defaulted: Vec<(VertexId, Symbol)> = Vec::new();
    for x in 0..length {
        let block = tree.children(x)?;
        if block.is_empty() {
            continue;
        }
        let needs_backward = block.contains(&(x.wrapping_sub(1)));
        let mut rows = Vec::with_capacity(q);
        for sym in 0..q {
            if needs_backward && marginals[x][sym].is_zero() {
                defaulted.push((x, sym));
                let width = q.pow(block.len() as u32);
                rows.push(vec![ratio(1, width as i64); width]);
                continue;
            }
            let mut row = Vec::new();
            for cfg in configs(&block, q) {
                let mut p = Rational::one();
                if let Some(fwd) = cfg.get(x + 1) {
                    p *= &spec.transition[sym][fwd];
                }
                if x > 0 {
                    if let Some(back) = cfg.get(x - 1) {
                        p *= &marginals[x - 1][back] * &spec.transition[back][sym]
                            / &marginals[x][sym];
                    }
                }
                row.push(p);
            }
            rows.push(row);
        }
        kernels.push(BlockKernel::new(x, block, rows, spec.alphabet)?);
    }
    let bmc = BmcSpec::new(tree, spec.alphabet, marginals[root_pos].clone(), kernels)?;
    Ok((bmc, defaulted))
}

/// Block Markov spec whose kernel rows are products of per-edge transition
/// matrices: children are conditionally independent given the parent by
/// construction.
pub fn product_mc_spec(
    tree: &RootedTree,
    alphabet: Alphabet,
    initial: Vec<Rational>,
    edge_kernels: &BTreeMap<(VertexId, VertexId), Vec<Vec<Rational>>>,
) -> Result<BmcSpec> {
    let q = alphabet.size();
    for ((x, y), matrix) in edge_kernels {
        if matrix.len() != q {
            return Err(Error::InvalidSpec(format!(
                "edge kernel {x}->{y}: {} rows, expected {q}",
                matrix.len()
            )));
        }
        for (i, row) in matrix.iter().enumerate() {
            check_distribution(row, q, &format!("edge kernel {x}->{y} row {i}"))
                .map_err(|e| Error::InvalidSpec(e.to_string()))?;
        }
    }
    let mut kernels = Vec::new();
    for x in tree.vertices() {
        let block = tree.children(x)?;
        if block.is_empty() {
            continue;
        }
        for &y in &block {
            if !edge_kernels.contains_key(&(x, y)) {
                return Err(Error::InvalidSpec(format!(
                    "missing edge kernel for {} -> {}",
                    tree.label(x),
                    tree.label(y)
                )));
            }
        }
        let rows: Vec<Vec<Rational>> = (0..q)
            .map(|sym| {
                configs(&block, q)
                    .map(|cfg| {
                        block
                            .iter()
                            .map(|&y| &edge_kernels[&(x, y)][sym][cfg.get(y).unwrap()])
                            .product()
                    })
                    .collect()
            })
            .collect();
        kernels.push(BlockKernel::new(x, block, rows, alphabet)?);
    }
    BmcSpec::new(tree.clone(), alphabet, initial, kernels)
}

/// The four published conditional probabilities of the counter-example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleValues {
    /// Children block of (0,0) given everything outside its strict future,
    /// from root (0,1), all symbols 0.
    pub bmc_lhs: Rational,
    /// Same block given only the symbol at (0,0).
    pub bmc_rhs: Rational,
    /// Site (1,0) given (0,0) and (0,1), all symbols 0.
    pub mc_lhs: Rational,
    /// Site (1,0) given (0,0) alone.
    pub mc_rhs: Rational,
}

#[derive(Debug, Clone)]
pub struct CounterexampleFixture {
    pub tree: RootedTree,
    pub measure: JointMeasure,
    pub expected: CounterexampleValues,
}

/// The chain driving the counter-example: uniform start, transitions
/// `0 -> {0: 1/2, 1: 1/2}` and `1 -> {0: 1}`.
pub fn counterexample_chain() -> ChainSpec {
    let a = Alphabet::new(2).unwrap();
    ChainSpec::new(
        a,
        vec![ratio(1, 2), ratio(1, 2)],
        vec![
            vec![ratio(1, 2), ratio(1, 2)],
            vec![ratio(1, 1), ratio(0, 1)],
        ],
    )
    .unwrap()
}

fn counterexample_tree(arm: usize) -> (RootedTree, VertexTimeMap) {
    // Vertices (0,0), (1,0), ..., (arm,0), then (0,1), then (0,-1); rooted
    // at (0,-1). Vertex (k,0) reads the chain at time k+2, (0,1) at time 2,
    // (0,0) at time 1, (0,-1) at time 0.
    let mut labels: Vec<String> = (0..=arm).map(|k| format!("({k},0)")).collect();
    labels.push("(0,1)".into());
    labels.push("(0,-1)".into());
    let n = labels.len();
    let mut edges: Vec<(VertexId, VertexId)> = (0..arm).map(|k| (k, k + 1)).collect();
    edges.push((0, n - 2));
    edges.push((0, n - 1));
    let tree = RootedTree::with_labels(labels, &edges, n - 1).unwrap();
    let mut times: Vec<usize> = (0..=arm).map(|k| k + 2).collect();
    times[0] = 1; // (0,0) reads X_1
    times.push(2); // (0,1) reads X_2
    times.push(0); // (0,-1) reads X_0
    let map = VertexTimeMap::new(&tree, times).unwrap();
    (tree, map)
}

/// The five-vertex measure separating the block Markov class from the tree
/// Markov chains, with its four exact conditional values.
pub fn counterexample_fixture() -> CounterexampleFixture {
    let spec = counterexample_chain();
    let (tree, map) = counterexample_tree(2);
    let measure = embed_chain(&spec, &tree, &map).expect("fixture embeds");
    CounterexampleFixture {
        tree,
        measure,
        expected: CounterexampleValues {
            bmc_lhs: ratio(1, 6),
            bmc_rhs: ratio(1, 4),
            mc_lhs: ratio(1, 2),
            mc_rhs: ratio(3, 4),
        },
    }
}

/// Built-in measures addressable by name from the command line.
pub fn builtin_fixture(name: &str) -> Option<(RootedTree, JointMeasure)> {
    match name {
        "counterexample" => {
            let f = counterexample_fixture();
            Some((f.tree, f.measure))
        }
        "path3" => {
            let a = Alphabet::new(2).unwrap();
            let spec = ChainSpec::new(
                a,
                vec![ratio(1, 2), ratio(1, 2)],
                vec![
                    vec![ratio(2, 3), ratio(1, 3)],
                    vec![ratio(1, 4), ratio(3, 4)],
                ],
            )
            .unwrap();
            let tree = RootedTree::new(3, &[(0, 1), (1, 2)], 0).unwrap();
            let map = VertexTimeMap::new(&tree, vec![0, 1, 2]).unwrap();
            let m = embed_chain(&spec, &tree, &map).unwrap();
            Some((tree, m))
        }
        "binary2" => {
            let a = Alphabet::new(2).unwrap();
            let tree =
                RootedTree::new(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)], 0).unwrap();
            let matrix = vec![
                vec![ratio(2, 3), ratio(1, 3)],
                vec![ratio(1, 4), ratio(3, 4)],
            ];
            let kernels: BTreeMap<(VertexId, VertexId), Vec<Vec<Rational>>> = tree
                .edge_list()
                .iter()
                .map(|&(a, b)| ((a, b), matrix.clone()))
                .collect();
            let spec = product_mc_spec(&tree, a, vec![ratio(1, 2), ratio(1, 2)], &kernels).unwrap();
            Some((tree, spec.realize()))
        }
        _ => None,
    }
}
