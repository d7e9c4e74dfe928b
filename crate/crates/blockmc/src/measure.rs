//! Exact probability measures on configuration spaces over finite trees.
//!
//! A `JointMeasure` is a dense table of `q^|V|` rationals indexed by a
//! mixed-radix encoding of full configurations (vertex 0 is the least
//! significant digit). Cylinder, marginal and conditional probabilities are
//! exact sums and quotients of table entries; nothing is ever rounded.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tree::{RootedTree, VertexId, VertexSet};

pub type Symbol = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("alphabet size must be >= 1".into()));
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn symbols(&self) -> std::ops::Range<Symbol> {
        0..self.size
    }

    pub fn check_symbol(&self, s: Symbol) -> Result<()> {
        if s < self.size {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol: s,
                q: self.size,
            })
        }
    }
}

/// Partial assignment of symbols to vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Configuration {
    map: BTreeMap<VertexId, Symbol>,
}

impl Configuration {
    pub fn empty() -> Self {
        Configuration::default()
    }

    pub fn single(x: VertexId, s: Symbol) -> Self {
        let mut map = BTreeMap::new();
        map.insert(x, s);
        Configuration { map }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VertexId, Symbol)>) -> Self {
        Configuration {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn support(&self) -> VertexSet {
        self.map.keys().copied().collect()
    }

    pub fn get(&self, x: VertexId) -> Option<Symbol> {
        self.map.get(&x).copied()
    }

    pub fn insert(&mut self, x: VertexId, s: Symbol) {
        self.map.insert(x, s);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, Symbol)> + '_ {
        self.map.iter().map(|(&k, &v)| (k, v))
    }

    /// Restriction to `set`.
    pub fn restrict(&self, set: &VertexSet) -> Configuration {
        Configuration {
            map: self
                .map
                .iter()
                .filter(|(k, _)| set.contains(k))
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    /// Union of two configurations with disjoint supports.
    pub fn union(&self, other: &Configuration) -> Result<Configuration> {
        let mut map = self.map.clone();
        for (&k, &v) in &other.map {
            if map.insert(k, v).is_some() {
                return Err(Error::OverlappingSupports);
            }
        }
        Ok(Configuration { map })
    }
}

/// Mixed-radix index of `cfg` over `set` (ascending vertex order, first
/// vertex least significant). `cfg` must assign every vertex of `set`.
pub fn config_index(set: &VertexSet, cfg: &Configuration, q: usize) -> usize {
    let mut idx = 0usize;
    let mut stride = 1usize;
    for &v in set {
        idx += cfg.get(v).expect("configuration must cover the index set") * stride;
        stride *= q;
    }
    idx
}

/// Inverse of `config_index`.
pub fn config_from_index(set: &VertexSet, mut idx: usize, q: usize) -> Configuration {
    let mut cfg = Configuration::empty();
    for &v in set {
        cfg.insert(v, idx % q);
        idx /= q;
    }
    cfg
}

/// Number of configurations on `set`.
pub fn config_count(set: &VertexSet, q: usize) -> usize {
    q.pow(set.len() as u32)
}

/// All configurations on `set` in ascending index order.
pub fn configs(set: &VertexSet, q: usize) -> impl Iterator<Item = Configuration> + '_ {
    (0..config_count(set, q)).map(move |i| config_from_index(set, i, q))
}

/// Project a mixed-radix table over `set` onto `keep ⊆ set` by summing out
/// the other vertices. One pass.
pub fn project_table(
    table: &[Rational],
    set: &VertexSet,
    keep: &VertexSet,
    q: usize,
) -> Vec<Rational> {
    debug_assert!(keep.is_subset(set));
    let positions: Vec<usize> = set
        .iter()
        .enumerate()
        .filter(|(_, v)| keep.contains(v))
        .map(|(i, _)| i)
        .collect();
    let strides: Vec<usize> = positions.iter().map(|&i| q.pow(i as u32)).collect();
    let mut out = vec![Rational::zero(); config_count(keep, q)];
    for (idx, p) in table.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let mut sub = 0usize;
        let mut sub_stride = 1usize;
        for &st in &strides {
            sub += ((idx / st) % q) * sub_stride;
            sub_stride *= q;
        }
        out[sub] += p;
    }
    out
}

/// Exact joint law of a tree-indexed process, as a full probability table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointMeasure {
    tree: RootedTree,
    alphabet: Alphabet,
    table: Vec<Rational>,
    positive: bool,
}

impl JointMeasure {
    /// Validates the table: `q^|V|` entries, all >= 0, summing to exactly 1.
    pub fn new(tree: RootedTree, alphabet: Alphabet, table: Vec<Rational>) -> Result<Self> {
        let expect = config_count(&tree.vertex_set(), alphabet.size());
        if table.len() != expect {
            return Err(Error::InvalidMeasure(format!(
                "table must have q^|V| = {expect} entries, got {}",
                table.len()
            )));
        }
        if table.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidMeasure("negative probability entry".into()));
        }
        let total: Rational = table.iter().fold(Rational::zero(), |acc, p| acc + p);
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "table entries must sum to exactly 1, got {total}"
            )));
        }
        let positive = table.iter().all(|p| p.is_positive());
        Ok(JointMeasure {
            tree,
            alphabet,
            table,
            positive,
        })
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    /// True when every full configuration has strictly positive mass
    /// (equivalently, every cylinder does).
    pub fn is_positive(&self) -> bool {
        self.positive
    }

    /// Probability of one full configuration.
    pub fn probability_of_index(&self, idx: usize) -> &Rational {
        &self.table[idx]
    }

    fn check_support(&self, c: &Configuration) -> Result<()> {
        let n = self.tree.vertex_count();
        for (v, s) in c.iter() {
            if v >= n {
                return Err(Error::VertexNotInTree(v));
            }
            self.alphabet.check_symbol(s)?;
        }
        Ok(())
    }

    /// Marginal table over `keep`, indexed mixed-radix over `keep`'s
    /// ascending vertices. One pass over the full table.
    pub fn project(&self, keep: &VertexSet) -> Result<Vec<Rational>> {
        let n = self.tree.vertex_count();
        if let Some(&v) = keep.iter().find(|&&v| v >= n) {
            return Err(Error::VertexNotInTree(v));
        }
        let all = self.tree.vertex_set();
        Ok(project_table(&self.table, &all, keep, self.alphabet.size()))
    }

    /// Probability of the cylinder event fixed by `c`; 1 for the empty
    /// configuration.
    pub fn cylinder_probability(&self, c: &Configuration) -> Result<Rational> {
        self.check_support(c)?;
        let support = c.support();
        let proj = self.project(&support)?;
        let q = self.alphabet.size();
        Ok(proj[config_index(&support, c, q)].clone())
    }

    /// `P[target | given]`, exact. Errors on overlapping supports and on a
    /// null conditioning event.
    pub fn conditional_probability(
        &self,
        target: &Configuration,
        given: &Configuration,
    ) -> Result<Rational> {
        let joint = target.union(given)?;
        let denom = self.cylinder_probability(given)?;
        if denom.is_zero() {
            return Err(Error::NullConditioning);
        }
        let numer = self.cylinder_probability(&joint)?;
        Ok(numer / denom)
    }

    /// Verifies `P(a ∪ b | c) = P(a | b ∪ c) · P(b | c)` exactly.
    pub fn chain_rule_check(
        &self,
        a: &Configuration,
        b: &Configuration,
        c: &Configuration,
    ) -> Result<bool> {
        let ab = a.union(b)?;
        let bc = b.union(c)?;
        let lhs = self.conditional_probability(&ab, c)?;
        let rhs = self.conditional_probability(a, &bc)? * self.conditional_probability(b, c)?;
        Ok(lhs == rhs)
    }

    /// Restriction of the measure to the induced subtree on `keep`.
    ///
    /// `keep` must induce a connected subgraph (the result carries a rooted
    /// tree); connectivity of arbitrary callers' sets is their concern.
    pub fn marginalize(&self, keep: &VertexSet) -> Result<JointMeasure> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "marginalize onto an empty set".into(),
            ));
        }
        let table = self.project(keep)?;
        let ids: Vec<VertexId> = keep.iter().copied().collect();
        let labels: Vec<String> = ids
            .iter()
            .map(|&v| self.tree.label(v).to_string())
            .collect();
        let mut edges = Vec::new();
        for (new_a, &a) in ids.iter().enumerate() {
            for (new_b, &b) in ids.iter().enumerate() {
                if a < b && self.tree.neighbors(a)?.contains(&b) {
                    edges.push((new_a, new_b));
                }
            }
        }
        let root = ids.iter().position(|&v| v == self.tree.root()).unwrap_or(0);
        let subtree = RootedTree::with_labels(labels, &edges, root)?;
        JointMeasure::new(subtree, self.alphabet, table)
    }

    /// Tests whether the events on `a_set` are conditionally independent of
    /// the events on `b_set` given the events on `c_set`:
    /// `P[a | b ∪ c] = P[a | c]` for all configurations with positive
    /// conditioning mass. Returns the first failure in ascending
    /// (a, b, c) index order, or `None` when the triple holds.
    pub fn conditional_independence(
        &self,
        a_set: &VertexSet,
        b_set: &VertexSet,
        c_set: &VertexSet,
    ) -> Result<Option<IndependenceWitness>> {
        for (x, y) in [(a_set, b_set), (a_set, c_set), (b_set, c_set)] {
            if x.intersection(y).next().is_some() {
                return Err(Error::OverlappingSupports);
            }
        }
        let q = self.alphabet.size();
        let abc: VertexSet = a_set
            .union(b_set)
            .copied()
            .chain(c_set.iter().copied())
            .collect();
        let bc: VertexSet = b_set.union(c_set).copied().collect();
        let ac: VertexSet = a_set.union(c_set).copied().collect();
        let proj_abc = self.project(&abc)?;
        let proj_bc = self.project(&bc)?;
        let proj_ac = self.project(&ac)?;
        let proj_c = self.project(c_set)?;

        for a in configs(a_set, q) {
            for b in configs(b_set, q) {
                for c in configs(c_set, q) {
                    let bc_cfg = b.union(&c)?;
                    let bc_mass = &proj_bc[config_index(&bc, &bc_cfg, q)];
                    if bc_mass.is_zero() {
                        continue;
                    }
                    let abc_cfg = a.union(&bc_cfg)?;
                    let lhs = &proj_abc[config_index(&abc, &abc_cfg, q)] / bc_mass;
                    let c_mass = &proj_c[config_index(c_set, &c, q)];
                    let ac_cfg = a.union(&c)?;
                    let rhs = &proj_ac[config_index(&ac, &ac_cfg, q)] / c_mass;
                    if lhs != rhs {
                        return Ok(Some(IndependenceWitness { a, b, c, lhs, rhs }));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// First counterexample to a conditional-independence triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceWitness {
    pub a: Configuration,
    pub b: Configuration,
    pub c: Configuration,
    /// `P[a | b ∪ c]`
    pub lhs: Rational,
    /// `P[a | c]`
    pub rhs: Rational,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, sum};

    fn uniform_measure(tree: RootedTree, q: usize) -> JointMeasure {
        let alphabet = Alphabet::new(q).unwrap();
        let count = config_count(&tree.vertex_set(), q);
        let table = vec![ratio(1, count as i64); count];
        JointMeasure::new(tree, alphabet, table).unwrap()
    }

    /// Bernoulli(p(v)) product measure on a path, vertex v has P[1] = pv.
    fn product_measure(ps: &[(i64, i64)]) -> JointMeasure {
        let n = ps.len();
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let tree = RootedTree::new(n, &edges, 0).unwrap();
        let alphabet = Alphabet::new(2).unwrap();
        let mut table = Vec::new();
        for idx in 0..(1usize << n) {
            let mut p = ratio(1, 1);
            for (v, &(num, den)) in ps.iter().enumerate() {
                let one_prob = ratio(num, den);
                if idx >> v & 1 == 1 {
                    p *= one_prob;
                } else {
                    p *= ratio(1, 1) - one_prob;
                }
            }
            table.push(p);
        }
        JointMeasure::new(tree, alphabet, table).unwrap()
    }

    #[test]
    fn construction_validates_table() {
        let tree = RootedTree::new(2, &[(0, 1)], 0).unwrap();
        let a = Alphabet::new(2).unwrap();
        assert!(JointMeasure::new(tree.clone(), a, vec![ratio(1, 2); 2]).is_err()); // wrong length
        assert!(JointMeasure::new(tree.clone(), a, vec![ratio(1, 2); 4]).is_err()); // sums to 2
        let bad = vec![ratio(3, 2), ratio(-1, 2), ratio(0, 1), ratio(0, 1)];
        assert!(JointMeasure::new(tree.clone(), a, bad).is_err()); // negative entry
        let ok = vec![ratio(1, 4); 4];
        assert!(JointMeasure::new(tree, a, ok).unwrap().is_positive());
    }

    #[test]
    fn empty_cylinder_has_total_mass() {
        let m = uniform_measure(RootedTree::new(3, &[(0, 1), (1, 2)], 0).unwrap(), 2);
        assert_eq!(
            m.cylinder_probability(&Configuration::empty()).unwrap(),
            ratio(1, 1)
        );
    }

    #[test]
    fn full_support_cylinder_is_the_table_entry() {
        let m = product_measure(&[(1, 3), (1, 2)]);
        let full = Configuration::from_pairs([(0, 1), (1, 0)]);
        let idx = config_index(&m.tree().vertex_set(), &full, 2);
        assert_eq!(
            &m.cylinder_probability(&full).unwrap(),
            m.probability_of_index(idx)
        );
    }

    #[test]
    fn cylinder_rejects_bad_symbols_and_vertices() {
        let m = uniform_measure(RootedTree::new(2, &[(0, 1)], 0).unwrap(), 2);
        let bad_sym = Configuration::single(0, 7);
        assert_eq!(
            m.cylinder_probability(&bad_sym),
            Err(Error::SymbolOutOfRange { symbol: 7, q: 2 })
        );
        let bad_vert = Configuration::single(9, 0);
        assert_eq!(
            m.cylinder_probability(&bad_vert),
            Err(Error::VertexNotInTree(9))
        );
    }

    #[test]
    fn conditional_with_empty_given_is_the_cylinder() {
        let m = product_measure(&[(1, 3), (2, 5), (1, 2)]);
        let t = Configuration::from_pairs([(0, 1), (2, 0)]);
        assert_eq!(
            m.conditional_probability(&t, &Configuration::empty())
                .unwrap(),
            m.cylinder_probability(&t).unwrap()
        );
    }

    #[test]
    fn conditional_rejects_overlap_and_null_event() {
        let m = product_measure(&[(1, 2), (0, 1)]); // vertex 1 is constant 0
        let t = Configuration::single(0, 1);
        assert_eq!(
            m.conditional_probability(&t, &Configuration::single(0, 0)),
            Err(Error::OverlappingSupports)
        );
        let null = Configuration::single(1, 1);
        assert_eq!(
            m.conditional_probability(&t, &null),
            Err(Error::NullConditioning)
        );
    }

    #[test]
    fn chain_rule_holds_everywhere() {
        let m = product_measure(&[(1, 3), (2, 5), (1, 2), (3, 7)]);
        let a = Configuration::single(0, 1);
        let b = Configuration::single(2, 0);
        let c = Configuration::single(3, 1);
        assert!(m.chain_rule_check(&a, &b, &c).unwrap());
        assert!(m.chain_rule_check(&a, &b, &Configuration::empty()).unwrap());
    }

    #[test]
    fn marginalize_keeps_total_mass_and_matches_cylinders() {
        let m = product_measure(&[(1, 3), (2, 5), (1, 2)]);
        let keep: VertexSet = [0, 1].into_iter().collect();
        let sub = m.marginalize(&keep).unwrap();
        assert_eq!(sub.tree().vertex_count(), 2);
        assert_eq!(sum(sub.table()), ratio(1, 1));
        for cfg in configs(&keep, 2) {
            let sub_cfg = Configuration::from_pairs(
                cfg.iter()
                    .map(|(v, s)| (sub.tree().vertex_by_label(m.tree().label(v)).unwrap(), s)),
            );
            assert_eq!(
                sub.cylinder_probability(&sub_cfg).unwrap(),
                m.cylinder_probability(&cfg).unwrap()
            );
        }
    }

    #[test]
    fn marginalize_requires_a_connected_keep() {
        let m = product_measure(&[(1, 3), (2, 5), (1, 2)]);
        let keep: VertexSet = [0, 2].into_iter().collect(); // endpoints of the path
        assert!(matches!(m.marginalize(&keep), Err(Error::InvalidTree(_))));
        assert!(m.marginalize(&VertexSet::new()).is_err());
    }

    #[test]
    fn marginalize_to_everything_is_identity() {
        let m = product_measure(&[(1, 3), (2, 5)]);
        let all = m.tree().vertex_set();
        let same = m.marginalize(&all).unwrap();
        assert_eq!(same.table(), m.table());
    }

    #[test]
    fn marginalize_to_single_vertex_is_the_site_distribution() {
        let m = product_measure(&[(1, 3), (2, 5)]);
        let keep: VertexSet = [1].into_iter().collect();
        let sub = m.marginalize(&keep).unwrap();
        assert_eq!(sub.table(), &[ratio(3, 5), ratio(2, 5)]);
    }

    #[test]
    fn product_measure_is_conditionally_independent_everywhere() {
        let m = product_measure(&[(1, 3), (2, 5), (1, 2), (3, 7)]);
        let a: VertexSet = [0].into_iter().collect();
        let b: VertexSet = [1, 3].into_iter().collect();
        let c: VertexSet = [2].into_iter().collect();
        assert!(m.conditional_independence(&a, &b, &c).unwrap().is_none());
    }

    #[test]
    fn empty_b_is_always_independent() {
        let m = uniform_measure(RootedTree::new(3, &[(0, 1), (1, 2)], 0).unwrap(), 2);
        let a: VertexSet = [0, 1].into_iter().collect();
        let b = VertexSet::new();
        let c: VertexSet = [2].into_iter().collect();
        assert!(m.conditional_independence(&a, &b, &c).unwrap().is_none());
    }

    #[test]
    fn conditional_independence_rejects_overlap() {
        let m = uniform_measure(RootedTree::new(3, &[(0, 1), (1, 2)], 0).unwrap(), 2);
        let a: VertexSet = [0, 1].into_iter().collect();
        let b: VertexSet = [1].into_iter().collect();
        let c = VertexSet::new();
        assert_eq!(
            m.conditional_independence(&a, &b, &c),
            Err(Error::OverlappingSupports)
        );
    }

    #[test]
    fn tower_property_over_one_vertex_extensions() {
        let m = product_measure(&[(1, 3), (2, 5), (1, 2)]);
        let c = Configuration::single(0, 1);
        for v in [1usize, 2] {
            let mut total = Rational::zero();
            for s in 0..2 {
                let mut ext = c.clone();
                ext.insert(v, s);
                total += m.cylinder_probability(&ext).unwrap();
            }
            assert_eq!(total, m.cylinder_probability(&c).unwrap());
        }
    }

    #[test]
    fn config_index_round_trip() {
        let set: VertexSet = [1, 3, 4].into_iter().collect();
        for q in [2usize, 3] {
            for i in 0..config_count(&set, q) {
                let cfg = config_from_index(&set, i, q);
                assert_eq!(config_index(&set, &cfg, q), i);
            }
        }
    }
}
