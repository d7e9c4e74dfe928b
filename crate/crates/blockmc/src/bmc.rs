//! Block Markov chain specifications and their exact realization.
//!
//! A `BmcSpec` is an initial distribution at the root plus one stochastic
//! block kernel per non-leaf vertex, mapping the symbol at the vertex to a
//! joint distribution over its whole children block. Kernel rows are joint
//! distributions, not forced products: sibling correlation is allowed and is
//! exactly what separates this class from tree Markov chains.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::measure::{
    config_count, config_index, configs, Alphabet, Configuration, JointMeasure, Symbol,
};
use crate::rational::{format_ratio, Rational};
use crate::tree::{RootedTree, VertexId, VertexSet};

/// Stochastic kernel from the symbol at `vertex` to a joint distribution
/// over the configurations of its children block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockKernel {
    vertex: VertexId,
    block: VertexSet,
    /// `rows[s][i]` is the probability of the block configuration with
    /// mixed-radix index `i`, given symbol `s` at `vertex`.
    rows: Vec<Vec<Rational>>,
}

impl BlockKernel {
    pub fn new(
        vertex: VertexId,
        block: VertexSet,
        rows: Vec<Vec<Rational>>,
        alphabet: Alphabet,
    ) -> Result<Self> {
        let q = alphabet.size();
        if block.is_empty() {
            return Err(Error::InvalidSpec(format!(
                "kernel at vertex {vertex}: children block is empty"
            )));
        }
        if rows.len() != q {
            return Err(Error::InvalidSpec(format!(
                "kernel at vertex {vertex}: expected {q} rows, got {}",
                rows.len()
            )));
        }
        let width = config_count(&block, q);
        for (s, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::InvalidSpec(format!(
                    "kernel at vertex {vertex}, row {s}: expected {width} entries, got {}",
                    row.len()
                )));
            }
            if row.iter().any(|p| p < &Rational::zero()) {
                return Err(Error::InvalidSpec(format!(
                    "kernel at vertex {vertex}, row {s}: negative entry"
                )));
            }
            let total: Rational = row.iter().fold(Rational::zero(), |acc, p| acc + p);
            if total != Rational::from_integer(1.into()) {
                return Err(Error::InvalidSpec(format!(
                    "kernel at vertex {vertex}, row {s}: sums to {total}, expected 1"
                )));
            }
        }
        Ok(BlockKernel {
            vertex,
            block,
            rows,
        })
    }

    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    pub fn block(&self) -> &VertexSet {
        &self.block
    }

    pub fn row(&self, s: Symbol) -> &[Rational] {
        &self.rows[s]
    }
}

/// Initial root distribution plus one block kernel per non-leaf vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmcSpec {
    tree: RootedTree,
    alphabet: Alphabet,
    initial: Vec<Rational>,
    kernels: BTreeMap<VertexId, BlockKernel>,
}

impl BmcSpec {
    pub fn new(
        tree: RootedTree,
        alphabet: Alphabet,
        initial: Vec<Rational>,
        kernels: Vec<BlockKernel>,
    ) -> Result<Self> {
        let q = alphabet.size();
        if initial.len() != q {
            return Err(Error::InvalidSpec(format!(
                "initial distribution has {} entries, expected {q}",
                initial.len()
            )));
        }
        if initial.iter().any(|p| p < &Rational::zero()) {
            return Err(Error::InvalidSpec(
                "initial distribution: negative entry".into(),
            ));
        }
        let total: Rational = initial.iter().fold(Rational::zero(), |acc, p| acc + p);
        if total != Rational::from_integer(1.into()) {
            return Err(Error::InvalidSpec(format!(
                "initial distribution sums to {total}, expected 1"
            )));
        }

        let mut by_vertex = BTreeMap::new();
        for k in kernels {
            let x = k.vertex();
            if x >= tree.vertex_count() {
                return Err(Error::VertexNotInTree(x));
            }
            let children = tree.children(x)?;
            if children.is_empty() {
                return Err(Error::NoBlockAtLeaf(x));
            }
            if k.block() != &children {
                return Err(Error::InvalidSpec(format!(
                    "kernel at vertex {x}: block {:?} does not match children {:?}",
                    k.block(),
                    children
                )));
            }
            if by_vertex.insert(x, k).is_some() {
                return Err(Error::InvalidSpec(format!(
                    "duplicate kernel at vertex {x}"
                )));
            }
        }
        for x in tree.vertices() {
            if !tree.is_leaf(x)? && !by_vertex.contains_key(&x) {
                return Err(Error::InvalidSpec(format!(
                    "missing kernel at non-leaf vertex {x}"
                )));
            }
        }
        Ok(BmcSpec {
            tree,
            alphabet,
            initial,
            kernels: by_vertex,
        })
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn kernel(&self, x: VertexId) -> Option<&BlockKernel> {
        self.kernels.get(&x)
    }

    /// One kernel row entry: the probability of `target` on the children
    /// block of `x`, given symbol `sym` at `x`.
    pub fn block_transition(
        &self,
        x: VertexId,
        sym: Symbol,
        target: &Configuration,
    ) -> Result<Rational> {
        if x >= self.tree.vertex_count() {
            return Err(Error::VertexNotInTree(x));
        }
        self.alphabet.check_symbol(sym)?;
        let kernel = self.kernels.get(&x).ok_or(Error::NoBlockAtLeaf(x))?;
        if &target.support() != kernel.block() {
            return Err(Error::InvalidArgument(
                "target must cover exactly the children block".into(),
            ));
        }
        for (_, s) in target.iter() {
            self.alphabet.check_symbol(s)?;
        }
        let idx = config_index(kernel.block(), target, self.alphabet.size());
        Ok(kernel.row(sym)[idx].clone())
    }

    /// The joint measure defined by the factorization: the probability of a
    /// full configuration is the initial mass at the root times one kernel
    /// row entry per non-leaf vertex. Row sums telescope to total mass 1.
    pub fn realize(&self) -> JointMeasure {
        let q = self.alphabet.size();
        let n = self.tree.vertex_count();
        let size = q.pow(n as u32);
        let root_stride = q.pow(self.tree.root() as u32);

        // Per-kernel strides for reading the block sub-index out of a full
        // configuration index.
        let mut kernel_strides: Vec<(VertexId, usize, Vec<usize>)> = Vec::new();
        for (&x, k) in &self.kernels {
            let strides: Vec<usize> = k.block().iter().map(|&v| q.pow(v as u32)).collect();
            kernel_strides.push((x, q.pow(x as u32), strides));
        }

        let mut table = Vec::with_capacity(size);
        for idx in 0..size {
            let mut p = self.initial[(idx / root_stride) % q].clone();
            for (x, x_stride, strides) in &kernel_strides {
                if p.is_zero() {
                    break;
                }
                let sym = (idx / x_stride) % q;
                let mut sub = 0usize;
                let mut sub_stride = 1usize;
                for st in strides {
                    sub += ((idx / st) % q) * sub_stride;
                    sub_stride *= q;
                }
                p *= &self.kernels[x].rows[sym][sub];
            }
            table.push(p);
        }
        JointMeasure::new(self.tree.clone(), self.alphabet, table)
            .expect("realized table is a probability measure")
    }
}

/// `P[target on S_n(x) | x = from_sym]`, verifying on the way that the
/// conditional decomposes exactly through every intermediate level `S_k(x)`:
/// the sum over intermediate configurations of
/// `P[target | cfg on S_k] * P[cfg on S_k | x = from_sym]`
/// equals the direct conditional for every `1 <= k < n`. Null intermediate
/// configurations contribute zero.
pub fn n_step_block(
    m: &JointMeasure,
    t: &RootedTree,
    x: VertexId,
    n: usize,
    from_sym: Symbol,
    target: &Configuration,
) -> Result<Rational> {
    if !t.same_underlying(m.tree()) {
        return Err(Error::TreeMismatch);
    }
    if n == 0 {
        return Err(Error::InvalidArgument("step count must be >= 1".into()));
    }
    m.alphabet().check_symbol(from_sym)?;
    let level_n = t.level_k_successors(x, n)?;
    if level_n.is_empty() {
        return Err(Error::HorizonBeyondTreeDepth);
    }
    if target.support() != level_n {
        return Err(Error::InvalidArgument(
            "target must cover exactly the level-n successors of x".into(),
        ));
    }
    let from = Configuration::single(x, from_sym);
    let direct = m.conditional_probability(target, &from)?;

    let q = m.alphabet().size();
    for k in 1..n {
        let level_k = t.level_k_successors(x, k)?;
        let mut decomposed = Rational::zero();
        for mid in configs(&level_k, q) {
            if m.cylinder_probability(&mid)?.is_zero() {
                continue;
            }
            let through = m.conditional_probability(target, &mid)?;
            let reach = m.conditional_probability(&mid, &from)?;
            decomposed += through * reach;
        }
        if decomposed != direct {
            return Err(Error::BlockDecomposition {
                level: k,
                direct: format_ratio(&direct),
                decomposed: format_ratio(&decomposed),
            });
        }
    }
    Ok(direct)
}

/// The pair `(P[future | outside], P[future | x])` where `future` lives in
/// the strict future of `x` and `outside` assigns `x` and otherwise only
/// vertices outside the strict future. For a realized `BmcSpec` the two are
/// equal; for an arbitrary measure the pair is the witness of failure.
pub fn global_block_conditional(
    m: &JointMeasure,
    t: &RootedTree,
    x: VertexId,
    future: &Configuration,
    outside: &Configuration,
) -> Result<(Rational, Rational)> {
    if !t.same_underlying(m.tree()) {
        return Err(Error::TreeMismatch);
    }
    let strict_future = t.strict_future(x)?;
    if !future.support().is_subset(&strict_future) {
        return Err(Error::InvalidArgument(
            "future configuration must live inside the strict future of x".into(),
        ));
    }
    let outside_support = outside.support();
    if outside_support
        .intersection(&strict_future)
        .next()
        .is_some()
    {
        return Err(Error::InvalidArgument(
            "outside configuration must avoid the strict future of x".into(),
        ));
    }
    let sym = outside
        .get(x)
        .ok_or_else(|| Error::InvalidArgument("outside configuration must assign x".into()))?;
    let lhs = m.conditional_probability(future, outside)?;
    let rhs = m.conditional_probability(future, &Configuration::single(x, sym))?;
    Ok((lhs, rhs))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::ratio;

    fn alphabet2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn row(entries: &[(i64, i64)]) -> Vec<Rational> {
        entries.iter().map(|&(n, d)| ratio(n, d)).collect()
    }

    /// The counter-example tree: vertices (0,0), (1,0), (2,0), (0,1), (0,-1)
    /// in that id order, rooted at (0,-1).
    pub(crate) fn t_tree() -> RootedTree {
        let labels = ["(0,0)", "(1,0)", "(2,0)", "(0,1)", "(0,-1)"]
            .map(String::from)
            .to_vec();
        RootedTree::with_labels(labels, &[(0, 1), (1, 2), (0, 3), (0, 4)], 4).unwrap()
    }

    /// Hand-built block kernels realizing the counter-example measure from
    /// root (0,-1): the two-child block at (0,0) carries the correlated
    /// joint law of its children.
    pub(crate) fn t_tree_spec() -> BmcSpec {
        let tree = t_tree();
        let a = alphabet2();
        // Chain P: 0 -> {0: 1/2, 1: 1/2}, 1 -> {0: 1, 1: 0}.
        let k_root = BlockKernel::new(
            4,
            [0].into_iter().collect(),
            vec![row(&[(1, 2), (1, 2)]), row(&[(1, 1), (0, 1)])],
            a,
        )
        .unwrap();
        // Block {1, 3} at vertex 0; sub-index = s(1) + 2*s(3).
        let k_center = BlockKernel::new(
            0,
            [1, 3].into_iter().collect(),
            vec![
                row(&[(1, 4), (1, 4), (1, 2), (0, 1)]),
                row(&[(1, 2), (1, 2), (0, 1), (0, 1)]),
            ],
            a,
        )
        .unwrap();
        let k_arm = BlockKernel::new(
            1,
            [2].into_iter().collect(),
            vec![row(&[(1, 2), (1, 2)]), row(&[(1, 1), (0, 1)])],
            a,
        )
        .unwrap();
        BmcSpec::new(
            tree,
            a,
            vec![ratio(1, 2), ratio(1, 2)],
            vec![k_root, k_center, k_arm],
        )
        .unwrap()
    }

    #[test]
    fn kernel_validation() {
        let a = alphabet2();
        let block: VertexSet = [1].into_iter().collect();
        assert!(BlockKernel::new(0, block.clone(), vec![row(&[(1, 2), (1, 2)])], a).is_err()); // one row
        assert!(BlockKernel::new(
            0,
            block.clone(),
            vec![row(&[(1, 2), (1, 3)]), row(&[(1, 2), (1, 2)])],
            a
        )
        .is_err()); // bad sum
        assert!(BlockKernel::new(
            0,
            block,
            vec![row(&[(3, 2), (-1, 2)]), row(&[(1, 2), (1, 2)])],
            a
        )
        .is_err()); // negative
        assert!(BlockKernel::new(0, VertexSet::new(), vec![], a).is_err()); // empty block
    }

    #[test]
    fn spec_validation() {
        let tree = RootedTree::new(2, &[(0, 1)], 0).unwrap();
        let a = alphabet2();
        let k = |v: VertexId, b: &[VertexId]| {
            BlockKernel::new(
                v,
                b.iter().copied().collect(),
                vec![row(&[(1, 2), (1, 2)]), row(&[(1, 2), (1, 2)])],
                a,
            )
            .unwrap()
        };
        // Initial must sum to 1.
        assert!(BmcSpec::new(
            tree.clone(),
            a,
            vec![ratio(1, 2), ratio(1, 3)],
            vec![k(0, &[1])]
        )
        .is_err());
        // Missing kernel at the only non-leaf.
        assert!(BmcSpec::new(tree.clone(), a, vec![ratio(1, 2), ratio(1, 2)], vec![]).is_err());
        // Kernel at a leaf.
        assert!(BmcSpec::new(
            tree.clone(),
            a,
            vec![ratio(1, 2), ratio(1, 2)],
            vec![k(0, &[1]), k(1, &[0])]
        )
        .is_err());
        assert!(BmcSpec::new(tree, a, vec![ratio(1, 2), ratio(1, 2)], vec![k(0, &[1])]).is_ok());
    }

    #[test]
    fn realize_single_vertex() {
        let tree = RootedTree::new(1, &[], 0).unwrap();
        let spec = BmcSpec::new(tree, alphabet2(), vec![ratio(1, 2), ratio(1, 2)], vec![]).unwrap();
        assert_eq!(spec.realize().table(), &[ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn realize_two_vertex_path() {
        let tree = RootedTree::new(2, &[(0, 1)], 0).unwrap();
        let a = alphabet2();
        let k = BlockKernel::new(
            0,
            [1].into_iter().collect(),
            vec![row(&[(1, 3), (2, 3)]), row(&[(1, 2), (1, 2)])],
            a,
        )
        .unwrap();
        let spec = BmcSpec::new(tree, a, vec![ratio(1, 1), ratio(0, 1)], vec![k]).unwrap();
        let m = spec.realize();
        // Index = s(0) + 2*s(1).
        assert_eq!(
            m.table(),
            &[ratio(1, 3), ratio(0, 1), ratio(2, 3), ratio(0, 1)]
        );
    }

    #[test]
    fn t_tree_realization_reproduces_the_published_conditionals() {
        let m = t_tree_spec().realize();
        assert_eq!(m.table().len(), 32);
        // P[(0,-1)=0, (1,0)=0 | (0,0)=0, (0,1)=0] = 1/6
        let target = Configuration::from_pairs([(4, 0), (1, 0)]);
        let given = Configuration::from_pairs([(0, 0), (3, 0)]);
        assert_eq!(
            m.conditional_probability(&target, &given).unwrap(),
            ratio(1, 6)
        );
        // P[(0,-1)=0, (1,0)=0 | (0,0)=0] = 1/4
        let given_x = Configuration::single(0, 0);
        assert_eq!(
            m.conditional_probability(&target, &given_x).unwrap(),
            ratio(1, 4)
        );
        // P[(0,0)=0] = 3/4
        assert_eq!(
            m.cylinder_probability(&Configuration::single(0, 0))
                .unwrap(),
            ratio(3, 4)
        );
    }

    #[test]
    fn block_transition_point_mass_and_uniform() {
        let tree = RootedTree::new(3, &[(0, 1), (0, 2)], 0).unwrap();
        let a = alphabet2();
        // Row 0: point mass on (1,1); row 1: uniform.
        let k = BlockKernel::new(
            0,
            [1, 2].into_iter().collect(),
            vec![
                row(&[(0, 1), (0, 1), (0, 1), (1, 1)]),
                row(&[(1, 4), (1, 4), (1, 4), (1, 4)]),
            ],
            a,
        )
        .unwrap();
        let spec = BmcSpec::new(tree, a, vec![ratio(1, 2), ratio(1, 2)], vec![k]).unwrap();
        let ones = Configuration::from_pairs([(1, 1), (2, 1)]);
        let zeros = Configuration::from_pairs([(1, 0), (2, 0)]);
        assert_eq!(spec.block_transition(0, 0, &ones).unwrap(), ratio(1, 1));
        assert_eq!(spec.block_transition(0, 0, &zeros).unwrap(), ratio(0, 1));
        assert_eq!(spec.block_transition(0, 1, &ones).unwrap(), ratio(1, 4));
        // Leaf vertex has no block.
        assert_eq!(
            spec.block_transition(1, 0, &ones),
            Err(Error::NoBlockAtLeaf(1))
        );
        // Wrong support.
        assert!(spec
            .block_transition(0, 0, &Configuration::single(1, 1))
            .is_err());
    }

    #[test]
    fn t_tree_block_transition_matches_the_chain() {
        let spec = t_tree_spec();
        // P[(0,1)=0, (1,0)=0 | (0,0)=0] = 1/2 * 1/2 = 1/4.
        let target = Configuration::from_pairs([(1, 0), (3, 0)]);
        assert_eq!(spec.block_transition(0, 0, &target).unwrap(), ratio(1, 4));
    }

    #[test]
    fn kernel_recovery_from_realization() {
        let spec = t_tree_spec();
        let m = spec.realize();
        for x in spec.tree().vertices() {
            let Some(kernel) = spec.kernel(x) else {
                continue;
            };
            for sym in 0..2 {
                let x_cfg = Configuration::single(x, sym);
                if m.cylinder_probability(&x_cfg).unwrap().is_zero() {
                    continue;
                }
                for target in configs(kernel.block(), 2) {
                    assert_eq!(
                        spec.block_transition(x, sym, &target).unwrap(),
                        m.conditional_probability(&target, &x_cfg).unwrap(),
                        "x={x} sym={sym}"
                    );
                }
            }
        }
    }

    #[test]
    fn n_step_block_on_a_path_is_the_matrix_power() {
        // Chain P = [[1/2,1/2],[1,0]] on the path 0-1-2: (P^2)[0][0] = 3/4.
        let tree = RootedTree::new(3, &[(0, 1), (1, 2)], 0).unwrap();
        let a = alphabet2();
        let step = |v: VertexId, b: VertexId| {
            BlockKernel::new(
                v,
                [b].into_iter().collect(),
                vec![row(&[(1, 2), (1, 2)]), row(&[(1, 1), (0, 1)])],
                a,
            )
            .unwrap()
        };
        let spec = BmcSpec::new(
            tree.clone(),
            a,
            vec![ratio(1, 2), ratio(1, 2)],
            vec![step(0, 1), step(1, 2)],
        )
        .unwrap();
        let m = spec.realize();
        let got = n_step_block(&m, &tree, 0, 2, 0, &Configuration::single(2, 0)).unwrap();
        assert_eq!(got, ratio(3, 4));
        // Base case agrees with the kernel row.
        let one = n_step_block(&m, &tree, 0, 1, 0, &Configuration::single(1, 0)).unwrap();
        assert_eq!(
            one,
            spec.block_transition(0, 0, &Configuration::single(1, 0))
                .unwrap()
        );
        // Beyond the leaf level.
        assert_eq!(
            n_step_block(&m, &tree, 0, 3, 0, &Configuration::single(2, 0)),
            Err(Error::HorizonBeyondTreeDepth)
        );
    }

    #[test]
    fn n_step_block_on_independent_leaves() {
        let tree =
            RootedTree::new(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)], 0).unwrap();
        let a = alphabet2();
        let uniform_pair = |v: VertexId, b1: VertexId, b2: VertexId| {
            BlockKernel::new(
                v,
                [b1, b2].into_iter().collect(),
                vec![row(&[(1, 4); 4]), row(&[(1, 4); 4])],
                a,
            )
            .unwrap()
        };
        let spec = BmcSpec::new(
            tree.clone(),
            a,
            vec![ratio(1, 2), ratio(1, 2)],
            vec![
                uniform_pair(0, 1, 2),
                uniform_pair(1, 3, 4),
                uniform_pair(2, 5, 6),
            ],
        )
        .unwrap();
        let m = spec.realize();
        let target = Configuration::from_pairs([(3, 1), (4, 0), (5, 1), (6, 1)]);
        assert_eq!(
            n_step_block(&m, &tree, 0, 2, 0, &target).unwrap(),
            ratio(1, 16)
        );
    }

    #[test]
    fn n_step_block_detects_a_broken_decomposition() {
        // A measure on the path 0-1-2 where 0 and 2 are perfectly correlated
        // but 1 is independent noise: conditioning through level S_1 = {1}
        // loses the correlation, so the identity must fail.
        let tree = RootedTree::new(3, &[(0, 1), (1, 2)], 0).unwrap();
        let a = alphabet2();
        let mut table = vec![ratio(0, 1); 8];
        for (idx, entry) in table.iter_mut().enumerate() {
            let s0 = idx & 1;
            let s2 = (idx >> 2) & 1;
            if s0 == s2 {
                *entry = ratio(1, 4); // 2 choices of s1, 2 diagonal pairs
            }
        }
        let m = JointMeasure::new(tree.clone(), a, table).unwrap();
        let err = n_step_block(&m, &tree, 0, 2, 0, &Configuration::single(2, 0));
        assert!(matches!(
            err,
            Err(Error::BlockDecomposition { level: 1, .. })
        ));
    }

    #[test]
    fn global_block_conditional_on_the_rerooted_t_tree() {
        let m = t_tree_spec().realize();
        let t = m.tree().rerooted(3).unwrap(); // root (0,1)
        let future = Configuration::from_pairs([(4, 0), (1, 0)]);
        let outside = Configuration::from_pairs([(0, 0), (3, 0)]);
        let (lhs, rhs) = global_block_conditional(&m, &t, 0, &future, &outside).unwrap();
        assert_eq!(lhs, ratio(1, 6));
        assert_eq!(rhs, ratio(1, 4));
    }

    #[test]
    fn global_block_conditional_with_empty_future() {
        let m = t_tree_spec().realize();
        let t = m.tree().clone();
        let outside = Configuration::from_pairs([(4, 0), (0, 0)]);
        let (lhs, rhs) =
            global_block_conditional(&m, &t, 0, &Configuration::empty(), &outside).unwrap();
        assert_eq!(lhs, ratio(1, 1));
        assert_eq!(rhs, ratio(1, 1));
    }

    #[test]
    fn global_block_conditional_rejects_misplaced_supports() {
        let m = t_tree_spec().realize();
        let t = m.tree().clone();
        // (0,0) is not in its own strict future.
        let bad_future = Configuration::single(0, 0);
        let outside = Configuration::from_pairs([(4, 0), (0, 0)]);
        assert!(global_block_conditional(&m, &t, 0, &bad_future, &outside).is_err());
        // Outside configuration must assign x.
        let future = Configuration::single(1, 0);
        let no_x = Configuration::single(4, 0);
        assert!(global_block_conditional(&m, &t, 0, &future, &no_x).is_err());
        // Outside configuration must avoid the strict future.
        let overlap = Configuration::from_pairs([(0, 0), (1, 0)]);
        assert!(global_block_conditional(&m, &t, 0, &future, &overlap).is_err());
    }
}
